#pragma once

// Rank-one convex test functions and inequality checks for symmetric
// measures on rank-one cubes. A finite battery can only ever be a smoke
// test; laminate status itself rests on the splitting-tree certificate.

#include "cubelam/cube.hpp"
#include "cubelam/measures.hpp"
#include "cubelam/test_function.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cubelam {

/// Frobenius norm, max row norm, +det, -det, then size-4 random max-affine
/// functions with coefficients p/q, |p| <= 8, 1 <= q <= 8.
std::vector<TestFunction> battery(std::uint64_t seed, int size);

/// A counterexample to midpoint convexity along A + s a(x)n.
struct RocViolation {
  Mat2d A;
  Vec2<double> a, n;
  double t;
  double margin;  // f(A+t a(x)n)/2 + f(A-t a(x)n)/2 - f(A)
};

struct RocResult {
  int trials = 0;
  bool exact = false;
  std::optional<RocViolation> violation;

  bool passed() const { return !violation.has_value(); }
};

/// Samples A in [-4,4]^4, a, n in [-2,2]^2 and t in (0,2]. Exact-evaluable
/// functions are checked in rational arithmetic on the sampled doubles.
RocResult roc_sampled(const TestFunction& f, int trials, std::uint64_t seed);

/// sum w f(X) - f(barycentre).
template <class S>
S check_inequality(const AtomicMeasure<S>& m, const TestFunction& f) {
  S s(0);
  for (const auto& a : m.atoms()) s += a.weight * f.eval<S>(a.point);
  return s - f.eval<S>(barycenter(m));
}

/// The symmetric measure with weight alpha on the even sign patterns and
/// 1/4 - alpha on the odd ones, on the caller's labelling.
AtomicMeasure<Rational> symmetric_measure(const Frame& f, const Rational& alpha);

struct MarginRow {
  std::string function;
  FunctionTag tag = FunctionTag::Custom;
  bool exact = false;
  double margin = 0.0;        // measure inequality
  double jensen_min = 0.0;    // smallest node margin on the certificate
  double jensen_global = 0.0; // certificate leaf sum minus value at 0
  bool passed = false;
};

struct SuiteReport {
  ConstructionCase kind = ConstructionCase::Uniform;
  ConstructionCase base = ConstructionCase::Uniform;
  bool certificate_valid = false;
  bool measure_matches = false;  // flattened certificate equals the target measure
  int certificate_order = 0;
  double min_margin = 0.0;
  std::vector<MarginRow> rows;

  bool passed() const;
};

/// Float margins must be >= -1e-9 (1 + scale); exact ones >= 0.
inline constexpr double kMarginTolerance = 1e-9;

/// Inequality check for one certificate over a battery: flattens, compares
/// against `expected` when given, and runs Jensen along every tree.
SuiteReport verify_certificate(const LaminateCertificate& cert,
                               const std::vector<TestFunction>& functions,
                               const std::optional<AtomicMeasure<Rational>>& expected = std::nullopt);

/// Builds the (1/16, 3/16) measure on the frame, checks the inequality for
/// every function and verifies it independently through the target-1/3
/// certificate. Functions are evaluated in parallel.
SuiteReport main_theorem_suite(const Frame& f, const std::vector<TestFunction>& functions,
                               const WitnessOptions& opt = {});

}  // namespace cubelam
