#pragma once

// Young-measure weights induced by sums of periodic sawtooth deformations
//   u(x) = sum_i a_i h(x . n_i + c_i)
// on the two-dimensional torus.

#include "cubelam/mat2.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cubelam {

/// Sign pattern eps in {-1,+1}^N packed as a bitmask: bit i set means eps_i = -1.
using SignPattern = std::uint32_t;

inline int sign_of(SignPattern eps, int i) { return ((eps >> i) & 1U) ? -1 : 1; }

/// '+'/'-' string, first character is eps_1.
std::string pattern_to_string(SignPattern eps, int n);
SignPattern pattern_from_string(const std::string& s);

/// Product of the signs; +1 on the "alpha" class of the cube.
inline int pattern_parity(SignPattern eps, int n) {
  int p = 1;
  for (int i = 0; i < n; ++i) p *= sign_of(eps, i);
  return p;
}

/// 1-periodic tent h(t) = t on [0,1/2], 1-t on [1/2,1].
Rational sawtooth(const Rational& t);
double sawtooth(double t);

/// h'(t) in {-1,+1}; std::nullopt at the breakpoints t = 0, 1/2 (mod 1).
std::optional<int> sawtooth_slope(const Rational& t);
std::optional<int> sawtooth_slope(double t);

using Frequency = std::array<std::int64_t, 2>;

template <class S>
struct SawtoothMode {
  Vec2<S> amplitude;
  Frequency frequency{};
  Rational phase{0};
};

template <class S>
struct PeriodicDeformation {
  std::vector<SawtoothMode<S>> modes;

  int size() const { return static_cast<int>(modes.size()); }
};

/// Probability weights indexed by sign pattern.
template <class S>
struct SignPatternMeasure {
  int n = 0;
  std::vector<S> weights;  // size 2^n

  const S& operator[](SignPattern eps) const { return weights.at(eps); }
  S total() const {
    S s(0);
    for (const auto& w : weights) s += w;
    return s;
  }
};

/// Rejects empty deformations, zero frequencies and N > 16.
template <class S>
void check_deformation(const PeriodicDeformation<S>& d) {
  if (d.modes.empty()) throw InputError("periodic deformation needs at least one mode");
  if (d.modes.size() > 16) throw InputError("at most 16 modes are supported");
  for (const auto& m : d.modes) {
    if (m.frequency[0] == 0 && m.frequency[1] == 0) {
      throw InputError("frequency vector must be nonzero");
    }
  }
}

/// Exact volume fractions of every sign cell on the torus. Amplitudes are ignored.
SignPatternMeasure<Rational> exact_weights(const PeriodicDeformation<Rational>& d);

/// Empirical frequencies from uniform samples; reproducible for a given seed
/// regardless of `workers`.
SignPatternMeasure<double> mc_weights(const PeriodicDeformation<Rational>& d,
                                      std::uint64_t samples, std::uint64_t seed,
                                      unsigned workers = 0);

/// Integral over the unit square of f(k x1 + l x2 + c), with f the period-2
/// step function (+1 on [0,1), -1 on [1,2)).
Rational correlation_integral(std::int64_t k, std::int64_t l, const Rational& c);

/// X_eps = sum_i eps_i a_i (x) n_i for every pattern.
template <class S>
std::vector<Mat2<S>> support_points(const PeriodicDeformation<S>& d) {
  const int n = d.size();
  std::vector<Mat2<S>> edges;
  for (const auto& m : d.modes) {
    const Vec2<S> freq(S(m.frequency[0]), S(m.frequency[1]));
    edges.push_back(tensor<S>(m.amplitude, freq));
  }
  std::vector<Mat2<S>> out(std::size_t{1} << n);
  for (SignPattern eps = 0; eps < out.size(); ++eps) {
    Mat2<S> x = Mat2<S>::Zero();
    for (int i = 0; i < n; ++i) {
      if (sign_of(eps, i) > 0) {
        x += edges[i];
      } else {
        x -= edges[i];
      }
    }
    out[eps] = x;
  }
  return out;
}

}  // namespace cubelam
