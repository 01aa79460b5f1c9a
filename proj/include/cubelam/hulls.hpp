#pragma once

// Semiconvex hulls of rank-one squares: the diagonal classification, the
// ruling pairing of the opposite-sign case, the hyperboloid carrying the
// doubly ruled surface, and exact polyconvex-hull membership.

#include "cubelam/lp.hpp"
#include "cubelam/mat2.hpp"

#include <Eigen/LU>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cubelam {

enum class SquareCase { DegeneratePlane, CoplanarTriangles, SameSign, OppositeSign };

std::string to_string(SquareCase c);

/// X1..X4 in cyclic order with all four edges rank-one (or zero).
template <class S>
struct RankOneSquare {
  std::array<Mat2<S>, 4> X;
  S d13, d24;

  static RankOneSquare make(const Mat2<S>& x1, const Mat2<S>& x2, const Mat2<S>& x3,
                            const Mat2<S>& x4) {
    RankOneSquare sq{{x1, x2, x3, x4}, det<S>(x1 - x3), det<S>(x2 - x4)};
    for (int i = 0; i < 4; ++i) {
      const Mat2<S> e = sq.X[i] - sq.X[(i + 1) % 4];
      if (!is_zero(e) && !is_rank_one<S>(e)) {
        throw InputError("not a rank-one square: edge X" + std::to_string(i + 1) + "X" +
                         std::to_string((i + 1) % 4 + 1) + " has nonzero determinant");
      }
    }
    return sq;
  }

  S scale() const {
    S s(0);
    for (const auto& x : X) s = std::max(s, max_abs(x));
    return s;
  }
};

namespace detail {

/// Zero test for a quantity quadratic in the entries.
template <class S>
bool quad_zero(const S& v, const S& scale) {
  if constexpr (is_exact_v<S>) {
    return v == 0;
  } else {
    return std::abs(v) <= kTau * (1.0 + scale * scale);
  }
}

template <class S>
bool affinely_dependent(const std::array<Mat2<S>, 4>& x) {
  // rank of [X2-X1, X3-X1, X4-X1] as 4-vectors below 3
  Eigen::Matrix<S, 4, 3> m;
  for (int j = 0; j < 3; ++j) {
    const Mat2<S> d = x[j + 1] - x[0];
    m.col(j) << d(0, 0), d(0, 1), d(1, 0), d(1, 1);
  }
  const Eigen::Matrix<S, 3, 3> g = m.transpose() * m;  // Gram matrix
  const S gdet = g.determinant();
  if constexpr (is_exact_v<S>) {
    return gdet == 0;
  } else {
    const double s = g.trace();
    return std::abs(gdet) <= kTau * (1.0 + s * s * s);
  }
}

}  // namespace detail

/// Case split on the signs of the two diagonal determinants.
template <class S>
SquareCase classify(const RankOneSquare<S>& sq) {
  const S scale = sq.scale();
  const bool z13 = detail::quad_zero(sq.d13, scale);
  const bool z24 = detail::quad_zero(sq.d24, scale);
  if (z13 && z24) return SquareCase::DegeneratePlane;
  if (z13 || z24) {
    // coplanar squares lie in a rank-one plane; the hull is the whole square
    return detail::affinely_dependent(sq.X) ? SquareCase::DegeneratePlane
                                            : SquareCase::CoplanarTriangles;
  }
  return sign(sq.d13) == sign(sq.d24) ? SquareCase::SameSign : SquareCase::OppositeSign;
}

/// s = f(t) = t d13 / (t d13 - (1-t) d24), pairing A(t) = tX1 + (1-t)X2 with
/// B(s) = sX4 + (1-s)X3 along a rank-one segment.
template <class S>
S pairing(const RankOneSquare<S>& sq, const S& t) {
  if (classify(sq) != SquareCase::OppositeSign) {
    throw InputError("pairing requires opposite-sign diagonals");
  }
  if (t < 0 || t > 1) throw InputError("pairing parameter outside [0,1]");
  return t * sq.d13 / (t * sq.d13 - (S(1) - t) * sq.d24);
}

/// Doubly ruled surface filling an opposite-sign rank-one square.
template <class S>
struct RuledSurfacePatch {
  RankOneSquare<S> square;

  static RuledSurfacePatch make(const RankOneSquare<S>& sq) {
    if (classify(sq) != SquareCase::OppositeSign) {
      throw InputError("ruled surface patch requires opposite-sign diagonals");
    }
    return RuledSurfacePatch{sq};
  }

  Mat2<S> edge_a(const S& t) const { return t * square.X[0] + (S(1) - t) * square.X[1]; }
  Mat2<S> edge_b(const S& t) const {
    const S s = pairing(square, t);
    return s * square.X[3] + (S(1) - s) * square.X[2];
  }
};

/// u A(t) + (1-u) B(t).
template <class S>
Mat2<S> surface_point(const RuledSurfacePatch<S>& p, const S& t, const S& u) {
  if (t < 0 || t > 1 || u < 0 || u > 1) throw InputError("surface parameters outside [0,1]");
  return u * p.edge_a(t) + (S(1) - u) * p.edge_b(t);
}

/// Centre R and level alpha of a quadric det(X - R) = alpha through four
/// affinely independent points. R need not lie in their affine span; when the
/// surface is a paraboloid inside the span it cannot.
template <class S>
struct Hyperboloid {
  Mat2<S> center;
  S level;
};

template <class S>
Hyperboloid<S> hyperboloid_center(const std::array<Mat2<S>, 4>& x) {
  if (detail::affinely_dependent(x)) {
    throw InputError("hyperboloid_center needs four affinely independent points");
  }
  // det X + <M, X> + k vanishes at the four points with M = sum_j g_j E_j,
  // E_j = X_{j+1} - X1; then R = -cof M since det(X - R) = det X - <cof R, X> + det R.
  Eigen::Matrix<S, 3, 3> gram;
  Eigen::Matrix<S, 3, 1> rhs;
  for (int i = 0; i < 3; ++i) {
    rhs(i) = det(x[0]) - det(x[i + 1]);
    for (int j = 0; j < 3; ++j) gram(i, j) = inner<S>(x[i + 1] - x[0], x[j + 1] - x[0]);
  }
  Eigen::Matrix<S, 3, 1> g;
  if constexpr (is_exact_v<S>) {
    const auto sol = solve_exact(MatrixQ(gram), VectorQ(rhs));
    if (!sol) throw InputError("hyperboloid_center: singular system");
    g = *sol;
  } else {
    auto lu = gram.fullPivLu();
    if (!lu.isInvertible()) throw InputError("hyperboloid_center: singular system");
    g = lu.solve(rhs);
  }
  Mat2<S> m = Mat2<S>::Zero();
  for (int j = 0; j < 3; ++j) m += g(j) * (x[j + 1] - x[0]);
  const Mat2<S> r = -cof(m);
  return {r, det<S>(x[0] - r)};
}

/// Intersection of a line with a patch.
template <class S>
struct SurfaceHit {
  Mat2<S> point;
  S t, u;      // patch parameters
  S sigma;     // point = origin + sigma * direction
};

/// Raised when the line lies inside the patch's quadric.
class LineInSurface : public std::runtime_error {
public:
  LineInSurface() : std::runtime_error("line lies in the surface") {}
};

namespace detail {

/// Parameters (t,u) of a point on the patch quadric, if it lies on the patch.
template <class S>
std::optional<std::pair<S, S>> pull_back(const RuledSurfacePatch<S>& p, const Mat2<S>& q) {
  const auto& X = p.square.X;
  // A(t) - q rank-one; det is affine along the edge direction X1 - X2.
  const Mat2<S> base = X[1] - q;
  const Mat2<S> dir = X[0] - X[1];
  const S c0 = det(base);
  const S c1 = inner<S>(cof(base), dir);
  const S scale = p.square.scale() + max_abs(q);
  S t;
  if (quad_zero(c1, scale)) {
    if (!quad_zero(c0, scale)) return std::nullopt;
    // q on the line through X1, X2: the patch edge u = 1
    int best = 0;
    for (int i = 1; i < 4; ++i) {
      if (scalar_abs(dir(i / 2, i % 2)) > scalar_abs(dir(best / 2, best % 2))) best = i;
    }
    if (dir(best / 2, best % 2) == 0) return std::nullopt;
    t = (q - X[1])(best / 2, best % 2) / dir(best / 2, best % 2);
    if (t < 0 || t > 1 || !same_point<S>(p.edge_a(t), q)) return std::nullopt;
    return std::make_pair(t, S(1));
  }
  t = -c0 / c1;
  if constexpr (!is_exact_v<S>) {
    if (t < 0 && t > -kTau) t = 0;
    if (t > 1 && t < 1 + kTau) t = 1;
  }
  if (t < 0 || t > 1) return std::nullopt;
  const Mat2<S> a = p.edge_a(t);
  const Mat2<S> b = p.edge_b(t);
  const Mat2<S> ab = a - b;
  // q = u a + (1-u) b  <=>  q - b = u (a - b)
  int best = 0;
  for (int i = 1; i < 4; ++i) {
    if (scalar_abs(ab(i / 2, i % 2)) > scalar_abs(ab(best / 2, best % 2))) best = i;
  }
  if (ab(best / 2, best % 2) == 0) return std::nullopt;
  S u = (q - b)(best / 2, best % 2) / ab(best / 2, best % 2);
  if constexpr (!is_exact_v<S>) {
    if (u < 0 && u > -kTau) u = 0;
    if (u > 1 && u < 1 + kTau) u = 1;
  }
  if (u < 0 || u > 1) return std::nullopt;
  if (!same_point<S>(u * a + (S(1) - u) * b, q)) return std::nullopt;
  return std::make_pair(t, u);
}

}  // namespace detail

/// Hits of origin + sigma*direction with the patch, sorted by sigma. The
/// direction must be rank-one, so det(X - R) is affine along the line and
/// each patch quadric is met at most once.
template <class S>
std::vector<SurfaceHit<S>> ray_surface_intersections(const RuledSurfacePatch<S>& p,
                                                     const Hyperboloid<S>& h,
                                                     const Mat2<S>& origin,
                                                     const Mat2<S>& direction) {
  if (!is_rank_one(direction)) throw InputError("ray direction must be rank-one");
  const Mat2<S> rel = origin - h.center;
  const S c0 = det(rel) - h.level;
  const S c1 = inner<S>(cof(rel), direction);
  const S scale = p.square.scale() + max_abs(origin) + max_abs(direction);
  std::vector<SurfaceHit<S>> hits;
  if (detail::quad_zero(c1, scale)) {
    if (detail::quad_zero(c0, scale)) throw LineInSurface();
    return hits;
  }
  const S sigma = -c0 / c1;
  const Mat2<S> q = origin + sigma * direction;
  if (auto tu = detail::pull_back(p, q)) {
    hits.push_back({q, tu->first, tu->second, sigma});
  }
  return hits;
}

template <class S>
std::vector<SurfaceHit<S>> ray_surface_intersections(const RuledSurfacePatch<S>& p,
                                                     const Mat2<S>& origin,
                                                     const Mat2<S>& direction) {
  return ray_surface_intersections(p, hyperboloid_center(p.square.X), origin, direction);
}

/// lambda1 lambda3 d13 + lambda2 lambda4 d24 = 0
template <class S>
bool square_pc_check(const RankOneSquare<S>& sq, const std::array<S, 4>& lambda) {
  const S v = lambda[0] * lambda[2] * sq.d13 + lambda[1] * lambda[3] * sq.d24;
  return detail::quad_zero(v, sq.scale());
}

/// Exact feasibility of lambda >= 0, sum lambda = 1, sum lambda_i K_i = X,
/// sum lambda_i det K_i = det X. Returns a witness weight vector.
std::optional<std::vector<Rational>> pc_membership(const std::vector<Mat2q>& K, const Mat2q& X);

}  // namespace cubelam
