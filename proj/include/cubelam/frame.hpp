#pragma once

// The rank-one cube spanned by C1, C2, C3 and its coordinate system
// (x,y,z) -> x C1 + y C2 + z C3, in which det(x,y,z) = a xy + b xz + c yz.

#include "cubelam/mat2.hpp"
#include "cubelam/periodic.hpp"

#include <array>
#include <optional>

namespace cubelam {

template <class S>
struct CubeFrame {
  std::array<Mat2<S>, 3> C;      // as supplied
  S raw_a{}, raw_b{}, raw_c{};   // coefficients before normalisation
  std::array<int, 3> axis_sign{1, 1, 1};
  bool det_flip = false;         // X -> JX with det J = -1 applied
  S a{}, b{}, c{};               // normalised coefficients
  bool degenerate = false;       // abc = 0; no normalisation is applied

  /// Normalised coordinates -> matrix: sum_i x_i s_i C_i.
  Mat2<S> point(const Vec3<S>& v) const {
    Mat2<S> m = Mat2<S>::Zero();
    for (int i = 0; i < 3; ++i) m += (v(i) * S(axis_sign[i])) * C[i];
    return m;
  }

  /// Vertex X_eps in the caller's (unnormalised) labelling.
  Mat2<S> vertex(SignPattern eps) const {
    Mat2<S> m = Mat2<S>::Zero();
    for (int i = 0; i < 3; ++i) m += S(sign_of(eps, i)) * C[i];
    return m;
  }

  /// Original label of the normalised vertex with coordinates v in {-1,1}^3.
  SignPattern label_of(const Vec3<S>& v) const {
    SignPattern eps = 0;
    for (int i = 0; i < 3; ++i) {
      if (sign(v(i)) * axis_sign[i] < 0) eps |= SignPattern{1} << i;
    }
    return eps;
  }

  /// Normalised coordinates of an original label.
  Vec3<S> coords_of(SignPattern eps) const {
    Vec3<S> v;
    for (int i = 0; i < 3; ++i) v(i) = S(sign_of(eps, i) * axis_sign[i]);
    return v;
  }

  /// True when an odd number of axes were flipped: the alpha and beta vertex
  /// classes are exchanged between the two labellings.
  bool classes_swapped() const {
    return axis_sign[0] * axis_sign[1] * axis_sign[2] < 0;
  }

  /// Normalised quadratic form a xy + b xz + c yz.
  S form(const Vec3<S>& v) const { return a * v(0) * v(1) + b * v(0) * v(2) + c * v(1) * v(2); }

  /// The three normalised coefficients have equal sign; det(point(v)) equals
  /// form(v) up to this global sign.
  int det_sign() const { return det_flip ? -1 : 1; }

  /// Returns the label of `m` if it coincides with a cube vertex.
  std::optional<SignPattern> find_vertex(const Mat2<S>& m) const {
    for (SignPattern eps = 0; eps < 8; ++eps) {
      if (same_point(vertex(eps), m)) return eps;
    }
    return std::nullopt;
  }

  /// Whether the eight vertices are pairwise distinct.
  bool vertices_distinct() const {
    for (SignPattern p = 0; p < 8; ++p) {
      for (SignPattern q = p + 1; q < 8; ++q) {
        if (same_point(vertex(p), vertex(q))) return false;
      }
    }
    return true;
  }
};

/// Computes (a,b,c) and the sign normalisation reaching a,b,c > 0.
/// Throws InputError if some C_i is not rank-one.
template <class S>
CubeFrame<S> build_frame(const Mat2<S>& c1, const Mat2<S>& c2, const Mat2<S>& c3) {
  CubeFrame<S> f;
  f.C = {c1, c2, c3};
  for (int i = 0; i < 3; ++i) {
    if (!is_rank_one(f.C[i])) {
      throw InputError("C" + std::to_string(i + 1) + " is not a rank-one matrix");
    }
  }
  f.raw_a = inner<S>(cof(c1), c2);
  f.raw_b = inner<S>(cof(c1), c3);
  f.raw_c = inner<S>(cof(c2), c3);

  auto vanishes = [&](const S& v) {
    if constexpr (is_exact_v<S>) {
      return v == 0;
    } else {
      const double scale = std::sqrt(frobenius_sq(c1) * frobenius_sq(c2) +
                                     frobenius_sq(c1) * frobenius_sq(c3) +
                                     frobenius_sq(c2) * frobenius_sq(c3));
      return std::abs(v) <= kTau * scale;
    }
  };
  if (vanishes(f.raw_a) || vanishes(f.raw_b) || vanishes(f.raw_c)) {
    f.degenerate = true;
    f.a = f.raw_a;
    f.b = f.raw_b;
    f.c = f.raw_c;
    return f;
  }

  // Flipping axis 1 negates (a,b), axis 2 negates (a,c), axis 3 negates (b,c);
  // the determinant flip negates all three. Search the 16 combinations in a
  // fixed order so the chosen normalisation is reproducible.
  for (int flip = 0; flip < 2; ++flip) {
    for (int mask = 0; mask < 8; ++mask) {
      const int s1 = (mask & 1) ? -1 : 1;
      const int s2 = (mask & 2) ? -1 : 1;
      const int s3 = (mask & 4) ? -1 : 1;
      const int g = flip ? -1 : 1;
      const S a = f.raw_a * S(g * s1 * s2);
      const S b = f.raw_b * S(g * s1 * s3);
      const S c = f.raw_c * S(g * s2 * s3);
      if (a > 0 && b > 0 && c > 0) {
        f.axis_sign = {s1, s2, s3};
        f.det_flip = flip != 0;
        f.a = a;
        f.b = b;
        f.c = c;
        return f;
      }
    }
  }
  throw std::logic_error("sign normalisation failed");
}

}  // namespace cubelam
