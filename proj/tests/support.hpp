#pragma once

// Random rational data shared by the unit and acceptance tests.

#include "cubelam/cube.hpp"
#include "cubelam/hulls.hpp"
#include "cubelam/mat2.hpp"

#include <random>

namespace cubelam::testing {

inline Rational small_rational(std::mt19937_64& rng, int num = 4, int den = 4) {
  std::uniform_int_distribution<int> p(-num, num);
  std::uniform_int_distribution<int> q(1, den);
  const int a = p(rng);
  return Rational(a, q(rng));
}

inline Mat2q random_mat(std::mt19937_64& rng, int num = 4, int den = 4) {
  return make_mat2(small_rational(rng, num, den), small_rational(rng, num, den),
                   small_rational(rng, num, den), small_rational(rng, num, den));
}

/// Nonzero rank-one a(x)n with entries in [-4, 4].
inline Mat2q random_rank_one(std::mt19937_64& rng) {
  for (;;) {
    const Vec2q a(small_rational(rng, 2, 2), small_rational(rng, 2, 2));
    const Vec2q n(small_rational(rng, 2, 2), small_rational(rng, 2, 2));
    const Mat2q m = tensor<Rational>(a, n);
    if (!is_zero(m)) return m;
  }
}

/// Random frame with distinct vertices.
inline Frame random_frame(std::mt19937_64& rng) {
  for (;;) {
    const Frame f = build_frame(random_rank_one(rng), random_rank_one(rng), random_rank_one(rng));
    if (f.vertices_distinct()) return f;
  }
}

enum class FrameKind { Case1, Case2, Degenerate };

inline FrameKind kind_of(const Frame& f) {
  if (f.degenerate) return FrameKind::Degenerate;
  const auto s = vertex_det_signs(f);
  return (s[0] > 0 || s[1] > 0 || s[2] > 0) ? FrameKind::Case2 : FrameKind::Case1;
}

inline Frame random_frame_of(std::mt19937_64& rng, FrameKind kind) {
  for (;;) {
    const Frame f = random_frame(rng);
    if (kind_of(f) == kind) return f;
  }
}

/// Rank-one square X1..X4 with X1 = 0: X2, X4 random rank-one, X3 = X2 + p(x)q
/// with q solving the linear condition det(X3 - X4) = 0.
inline std::optional<RankOneSquare<Rational>> random_square(std::mt19937_64& rng) {
  const Mat2q x1 = Mat2q::Zero();
  const Mat2q x2 = random_rank_one(rng);
  const Mat2q x4 = random_rank_one(rng);
  const Mat2q m = x2 - x4;
  const Vec2q p(small_rational(rng, 2, 2), small_rational(rng, 2, 2));
  // det(M + p(x)q) = det M + p^T cof(M) q
  const Vec2q g = cof(m).transpose() * p;
  const Rational gg = g.dot(g);
  if (gg == 0) return std::nullopt;
  const Vec2q q = (-det(m) / gg) * g;
  const Mat2q x3 = x2 + tensor<Rational>(p, q);
  try {
    return RankOneSquare<Rational>::make(x1, x2, x3, x4);
  } catch (const InputError&) {
    return std::nullopt;  // a zero edge that is not allowed, or similar
  }
}

/// The a = b = c frame from e1(x)e1, e2(x)e2, (1,1)(x)(1,1).
inline Frame equal_coefficient_frame() {
  const Mat2q c1 = make_mat2<Rational>(1, 0, 0, 0);
  const Mat2q c2 = make_mat2<Rational>(0, 0, 0, 1);
  const Mat2q c3 = make_mat2<Rational>(1, 1, 1, 1);
  return build_frame(c1, c2, c3);
}

}  // namespace cubelam::testing
