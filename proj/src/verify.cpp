#include "cubelam/verify.hpp"

#include <algorithm>
#include <future>
#include <random>

namespace cubelam {

namespace {

Rational random_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-8, 8);
  std::uniform_int_distribution<int> den(1, 8);
  const int p = num(rng);
  return Rational(p, den(rng));
}

double scale_of(const AtomicMeasure<Rational>& m) {
  double s = 0.0;
  for (const auto& a : m.atoms()) s = std::max(s, to_double(max_abs(a.point)));
  return s;
}

bool same_measure(const AtomicMeasure<Rational>& x, const AtomicMeasure<Rational>& y) {
  const auto cx = x.canonical();
  const auto cy = y.canonical();
  if (cx.size() != cy.size()) return false;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    if (!same_point(cx.atoms()[i].point, cy.atoms()[i].point) ||
        cx.atoms()[i].weight != cy.atoms()[i].weight) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<TestFunction> battery(std::uint64_t seed, int size) {
  if (size < 4) throw InputError("battery size must be at least 4");
  std::vector<TestFunction> out{frobenius_norm(), max_row_norm(), plus_det(), minus_det()};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(3, 6);
  for (int k = 0; k < size - 4; ++k) {
    std::vector<AffineForm> forms(count(rng));
    for (auto& f : forms) {
      for (int i = 0; i < 4; ++i) f.linear(i / 2, i % 2) = random_coefficient(rng);
      f.det_coeff = random_coefficient(rng);
      f.offset = random_coefficient(rng);
    }
    out.push_back(max_affine(std::move(forms), "max-affine-" + std::to_string(k)));
  }
  return out;
}

RocResult roc_sampled(const TestFunction& f, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("trials must be positive");
  RocResult r;
  r.exact = f.exact_evaluable();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(-4.0, 4.0);
  std::uniform_real_distribution<double> vec(-2.0, 2.0);
  std::uniform_real_distribution<double> step(0.0, 2.0);
  for (int i = 0; i < trials; ++i) {
    Mat2d A;
    A << entry(rng), entry(rng), entry(rng), entry(rng);
    const Vec2<double> a(vec(rng), vec(rng));
    const Vec2<double> n(vec(rng), vec(rng));
    double t = step(rng);
    if (t == 0.0) t = 1.0;  // keep t in (0,2]
    ++r.trials;
    double margin;
    bool violated;
    if (r.exact) {
      const Mat2q Aq = exact_from_double(A);
      // build the step exactly so it stays rank one
      const Vec2q aq(exact_from_double(a[0]), exact_from_double(a[1]));
      const Vec2q nq(exact_from_double(n[0]), exact_from_double(n[1]));
      const Mat2q D = exact_from_double(t) * tensor<Rational>(aq, nq);
      const Rational m = (f.exact(Mat2q(Aq + D)) + f.exact(Mat2q(Aq - D))) / 2 - f.exact(Aq);
      margin = to_double(m);
      violated = m < 0;
    } else {
      const Mat2d D = t * tensor<double>(a, n);
      const double fa = f(A);
      margin = 0.5 * f(Mat2d(A + D)) + 0.5 * f(Mat2d(A - D)) - fa;
      violated = margin < -kJensenTolerance * (1.0 + std::abs(fa));
    }
    if (violated) {
      r.violation = RocViolation{A, a, n, t, margin};
      return r;
    }
  }
  return r;
}

AtomicMeasure<Rational> symmetric_measure(const Frame& f, const Rational& alpha) {
  AtomicMeasure<Rational> m;
  const Rational beta = Rational(1, 4) - alpha;
  for (SignPattern eps = 0; eps < 8; ++eps) {
    m.add(f.vertex(eps), pattern_parity(eps, 3) > 0 ? alpha : beta);
  }
  return m;
}

bool SuiteReport::passed() const {
  if (!certificate_valid || !measure_matches) return false;
  return std::all_of(rows.begin(), rows.end(), [](const MarginRow& r) { return r.passed; });
}

SuiteReport verify_certificate(const LaminateCertificate& cert,
                               const std::vector<TestFunction>& functions,
                               const std::optional<AtomicMeasure<Rational>>& expected) {
  SuiteReport report;
  report.kind = cert.kind;
  report.base = cert.base;
  const TreeReport tr = validate_forest(cert.forest);
  report.certificate_valid = tr.valid;
  report.certificate_order = tr.order;
  if (!tr.valid) return report;
  const AtomicMeasure<Rational> flat = flatten(cert.forest);
  const AtomicMeasure<Rational> target = expected.value_or(flat);
  report.measure_matches = same_measure(flat, target) && is_zero(barycenter(flat)) &&
                           pc_constraints_check(flat).zero();
  const double scale = scale_of(target);

  // each function is independent; evaluate them concurrently, keep order
  std::vector<std::future<MarginRow>> jobs;
  for (const auto& fn : functions) {
    jobs.push_back(std::async(std::launch::async, [&cert, &target, &fn, scale] {
      MarginRow row;
      row.function = fn.name();
      row.tag = fn.tag();
      row.exact = fn.exact_evaluable();
      bool margin_ok;
      if (row.exact) {
        const Rational m = check_inequality(target, fn);
        row.margin = to_double(m);
        margin_ok = m >= 0;
      } else {
        const double m = to_double(check_inequality(target, fn));
        row.margin = m;
        margin_ok = m >= -kMarginTolerance * (1.0 + scale);
      }
      const JensenReport j = jensen_check(cert.forest, fn);
      row.jensen_min = j.min_node_margin;
      row.jensen_global = j.global_margin;
      row.passed = margin_ok && j.passed();
      return row;
    }));
  }
  report.min_margin = 0.0;
  bool first = true;
  for (auto& job : jobs) {
    report.rows.push_back(job.get());
    if (first || report.rows.back().margin < report.min_margin) report.min_margin = report.rows.back().margin;
    first = false;
  }
  return report;
}

SuiteReport main_theorem_suite(const Frame& f, const std::vector<TestFunction>& functions,
                               const WitnessOptions& opt) {
  const LaminateCertificate cert = symmetric_laminate(f, Rational(1, 3), opt);
  return verify_certificate(cert, functions, symmetric_measure(f, Rational(1, 16)));
}

}  // namespace cubelam
