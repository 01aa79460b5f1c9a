#pragma once

#include "cubelam/scalar.hpp"

#include <Eigen/Core>

namespace cubelam {

template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;
template <class S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;

using Mat2q = Mat2<Rational>;
using Mat2d = Mat2<double>;
using Vec2q = Vec2<Rational>;
using Vec3q = Vec3<Rational>;

template <class S>
Mat2<S> make_mat2(const S& m11, const S& m12, const S& m21, const S& m22) {
  Mat2<S> m;
  m << m11, m12, m21, m22;
  return m;
}

template <class S>
S det(const Mat2<S>& x) {
  return x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
}

/// Cofactor matrix, normalised so that det(X+Y) = det X + <cof X, Y> + det Y.
template <class S>
Mat2<S> cof(const Mat2<S>& x) {
  return make_mat2<S>(x(1, 1), -x(1, 0), -x(0, 1), x(0, 0));
}

/// Hilbert-Schmidt product.
template <class S>
S inner(const Mat2<S>& x, const Mat2<S>& y) {
  return x(0, 0) * y(0, 0) + x(0, 1) * y(0, 1) + x(1, 0) * y(1, 0) + x(1, 1) * y(1, 1);
}

/// a n^T
template <class S>
Mat2<S> tensor(const Vec2<S>& a, const Vec2<S>& n) {
  return a * n.transpose();
}

template <class S>
S frobenius_sq(const Mat2<S>& x) {
  return inner(x, x);
}

/// Largest absolute entry. Exact in exact mode, used as the residual norm.
template <class S>
S max_abs(const Mat2<S>& x) {
  S m = scalar_abs(x(0, 0));
  for (int i = 0; i < 4; ++i) {
    const S v = scalar_abs(x(i / 2, i % 2));
    if (v > m) m = v;
  }
  return m;
}

template <class S>
bool is_zero(const Mat2<S>& x) {
  return x(0, 0) == 0 && x(0, 1) == 0 && x(1, 0) == 0 && x(1, 1) == 0;
}

/// Exact: X != 0 and det X = 0. Float: |det X| <= tau |X|_F^2 with X != 0.
template <class S>
bool is_rank_one(const Mat2<S>& x) {
  if constexpr (is_exact_v<S>) {
    return !is_zero(x) && det(x) == 0;
  } else {
    const double f2 = frobenius_sq(x);
    return f2 > 0 && std::abs(det(x)) <= kTau * f2;
  }
}

/// Matrix equality used for duplicate merging: exact, or entrywise tau-close.
template <class S>
bool same_point(const Mat2<S>& x, const Mat2<S>& y) {
  if constexpr (is_exact_v<S>) {
    return x == y;
  } else {
    const double scale = 1.0 + std::max(max_abs(x), max_abs(y));
    return max_abs<double>(x - y) <= kTau * scale;
  }
}

inline Mat2d to_double(const Mat2q& x) {
  return x.unaryExpr([](const Rational& q) { return to_double(q); });
}

inline Mat2q exact_from_double(const Mat2d& x) {
  return x.unaryExpr([](double v) { return exact_from_double(v); });
}

/// Canonical strict-weak order, used to make merged measures deterministic.
template <class S>
bool lex_less(const Mat2<S>& x, const Mat2<S>& y) {
  for (int i = 0; i < 4; ++i) {
    const auto& a = x(i / 2, i % 2);
    const auto& b = y(i / 2, i % 2);
    if (a < b) return true;
    if (b < a) return false;
  }
  return false;
}

}  // namespace cubelam
