#include "cubelam/hulls.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace cubelam;
using cubelam::testing::random_square;

namespace {

Mat2q m(int a, int b, int c, int d) { return make_mat2<Rational>(a, b, c, d); }

// one rank-one diagonal: X1 = 0, X3 = e11
RankOneSquare<Rational> kite() {
  return RankOneSquare<Rational>::make(m(0, 0, 0, 0), m(1, 1, 0, 0), m(1, 0, 0, 0), m(1, 0, 1, 0));
}

std::vector<RankOneSquare<Rational>> squares_of(SquareCase kind, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RankOneSquare<Rational>> out;
  while (static_cast<int>(out.size()) < count) {
    const auto sq = random_square(rng);
    if (sq && classify(*sq) == kind) out.push_back(*sq);
  }
  return out;
}

}  // namespace

TEST(Square, RejectsNonRankOneEdges) {
  EXPECT_THROW(RankOneSquare<Rational>::make(m(0, 0, 0, 0), m(1, 0, 0, 1), m(1, 0, 0, 0), m(0, 0, 1, 0)),
               InputError);
}

TEST(Square, Classification) {
  // parallelogram spanned by e11, e22
  const auto para = RankOneSquare<Rational>::make(m(0, 0, 0, 0), m(1, 0, 0, 0), m(1, 0, 0, 1), m(0, 0, 0, 1));
  EXPECT_EQ(classify(para), SquareCase::OppositeSign);
  EXPECT_EQ(classify(kite()), SquareCase::CoplanarTriangles);
  // rank-one plane {[[x, y], [0, 0]]}
  const auto flat = RankOneSquare<Rational>::make(m(0, 0, 0, 0), m(1, 0, 0, 0), m(1, 1, 0, 0), m(0, 1, 0, 0));
  EXPECT_EQ(classify(flat), SquareCase::DegeneratePlane);
  EXPECT_FALSE(squares_of(SquareCase::SameSign, 3, 1).empty());
}

TEST(Square, FloatClassificationMatchesExact) {
  for (const auto& sq : squares_of(SquareCase::OppositeSign, 10, 2)) {
    const auto fs = RankOneSquare<double>::make(to_double(sq.X[0]), to_double(sq.X[1]),
                                                to_double(sq.X[2]), to_double(sq.X[3]));
    EXPECT_EQ(classify(fs), SquareCase::OppositeSign);
  }
}

TEST(Pairing, ResidualVanishesExactly) {
  std::mt19937_64 rng(3);
  for (const auto& sq : squares_of(SquareCase::OppositeSign, 30, 4)) {
    const auto p = RuledSurfacePatch<Rational>::make(sq);
    for (int k = 0; k <= 10; ++k) {
      const Rational t(k, 10);
      const Rational s = pairing(sq, t);
      EXPECT_GE(s, 0);
      EXPECT_LE(s, 1);
      EXPECT_EQ(det<Rational>(p.edge_a(t) - p.edge_b(t)), 0);
    }
  }
}

TEST(Pairing, RequiresOppositeSigns) {
  EXPECT_THROW(pairing(kite(), Rational(1, 2)), InputError);
}

TEST(Hyperboloid, ContainsCornersAndRulings) {
  for (const auto& sq : squares_of(SquareCase::OppositeSign, 20, 5)) {
    const auto h = hyperboloid_center(sq.X);
    for (const auto& x : sq.X) EXPECT_EQ(det<Rational>(x - h.center), h.level);
    const auto p = RuledSurfacePatch<Rational>::make(sq);
    for (int k = 0; k <= 4; ++k) {
      for (int j = 0; j <= 4; ++j) {
        const Mat2q q = surface_point(p, Rational(k, 4), Rational(j, 4));
        EXPECT_EQ(det<Rational>(q - h.center), h.level);
      }
    }
  }
}

TEST(RaySurface, HitsLieOnThePatch) {
  std::mt19937_64 rng(6);
  int hits = 0;
  for (const auto& sq : squares_of(SquareCase::OppositeSign, 30, 7)) {
    const auto p = RuledSurfacePatch<Rational>::make(sq);
    const auto h = hyperboloid_center(sq.X);
    // aim a rank-one line at an interior surface point
    const Mat2q target = surface_point(p, Rational(1, 3), Rational(2, 5));
    const Mat2q dir = cubelam::testing::random_rank_one(rng);
    const Mat2q origin = target - Rational(3, 2) * dir;
    std::vector<SurfaceHit<Rational>> found;
    try {
      found = ray_surface_intersections(p, h, origin, dir);
    } catch (const LineInSurface&) {
      continue;
    }
    ASSERT_EQ(found.size(), 1U);
    EXPECT_EQ(found[0].sigma, Rational(3, 2));
    EXPECT_EQ(found[0].point, target);
    EXPECT_EQ(surface_point(p, found[0].t, found[0].u), target);
    ++hits;
  }
  EXPECT_GT(hits, 20);
}

TEST(RaySurface, RejectsNonRankOneDirection) {
  const auto sq = squares_of(SquareCase::OppositeSign, 1, 8)[0];
  const auto p = RuledSurfacePatch<Rational>::make(sq);
  EXPECT_THROW(ray_surface_intersections(p, Mat2q(Mat2q::Zero()), m(1, 0, 0, 1)), InputError);
}

TEST(PcMembership, SquareCornersAndInteriorPoints) {
  for (const auto& sq : squares_of(SquareCase::SameSign, 15, 9)) {
    const std::vector<Mat2q> k(sq.X.begin(), sq.X.end());
    for (const auto& x : sq.X) EXPECT_TRUE(pc_membership(k, x).has_value());
    const Mat2q centre = (sq.X[0] + sq.X[1] + sq.X[2] + sq.X[3]) / 4;
    EXPECT_FALSE(pc_membership(k, centre).has_value());
    const Mat2q mid_edge = (sq.X[0] + sq.X[1]) / 2;
    EXPECT_TRUE(pc_membership(k, mid_edge).has_value());
  }
}

TEST(PcMembership, OppositeSignSurfaceIsInside) {
  for (const auto& sq : squares_of(SquareCase::OppositeSign, 10, 10)) {
    const std::vector<Mat2q> k(sq.X.begin(), sq.X.end());
    const auto p = RuledSurfacePatch<Rational>::make(sq);
    const Mat2q q = surface_point(p, Rational(1, 3), Rational(1, 2));
    const auto w = pc_membership(k, q);
    ASSERT_TRUE(w.has_value());
    std::array<Rational, 4> lam{(*w)[0], (*w)[1], (*w)[2], (*w)[3]};
    EXPECT_TRUE(square_pc_check(sq, lam));
  }
}

TEST(PcMembership, TwoTrianglesMatchBarycentricOracle) {
  const auto sq = kite();
  const std::vector<Mat2q> k(sq.X.begin(), sq.X.end());
  int members = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const Rational l2(i - 4, 32), l4(j - 4, 32), l3(1, 4);
      const Rational l1 = 1 - l2 - l3 - l4;
      const Mat2q q = l1 * sq.X[0] + l2 * sq.X[1] + l3 * sq.X[2] + l4 * sq.X[3];
      // affinely independent corners: unique barycentric coordinates
      const bool oracle = l1 >= 0 && l2 >= 0 && l4 >= 0 && l2 * l4 == 0;
      EXPECT_EQ(pc_membership(k, q).has_value(), oracle) << i << "," << j;
      members += oracle;
    }
  }
  EXPECT_GT(members, 10);
}

TEST(Lp, NonnegativeSolutions) {
  MatrixQ A(2, 3);
  A << 1, 1, 1, 1, -1, 0;
  VectorQ b(2);
  b << 1, 0;
  const auto x = find_nonnegative_solution(A, b);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(A * *x, b);
  b << 1, 2;
  EXPECT_FALSE(find_nonnegative_solution(A, b).has_value());
}
