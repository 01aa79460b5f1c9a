#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace cubelam {

/// Exact arbitrary-precision rational. Expression templates are disabled so
/// the type composes cleanly with Eigen's own expression templates.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

/// Relative tolerance used by every float-mode predicate.
inline constexpr double kTau = 1e-9;

/// Thrown for malformed user input (bad JSON, unparsable scalars, violated
/// preconditions on data supplied from outside the library).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a construction cannot be completed or a certificate fails.
class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class S>
S from_rational(const Rational& q) {
  if constexpr (is_exact_v<S>) {
    return q;
  } else {
    return to_double(q);
  }
}

inline Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite value cannot be made exact");
  return Rational(x);
}

/// "p/q" (or "p" for integers).
std::string to_string(const Rational& q);

/// Accepts "p/q", "p", optional leading sign. Denominator must be nonzero.
Rational parse_rational(std::string_view text);

Rational floor(const Rational& q);

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

template <class S>
S scalar_abs(const S& x) {
  if constexpr (is_exact_v<S>) {
    return abs(x);
  } else {
    return std::abs(x);
  }
}

template <class S>
int sign(const S& x) {
  return (x > 0) - (x < 0);
}

}  // namespace cubelam
