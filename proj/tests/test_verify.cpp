#include "cubelam/verify.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace cubelam;

TEST(Battery, DeterministicAndComplete) {
  const auto a = battery(5, 24);
  const auto b = battery(5, 24);
  ASSERT_EQ(a.size(), 24U);
  EXPECT_EQ(a[2].tag(), FunctionTag::PlusDet);
  EXPECT_EQ(a[3].tag(), FunctionTag::MinusDet);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Mat2q x = cubelam::testing::random_mat(rng);
    for (std::size_t k = 1; k < a.size(); ++k) EXPECT_EQ(a[k].exact(x), b[k].exact(x));
  }
  EXPECT_THROW(battery(5, 3), InputError);
}

TEST(Battery, MembersAreRankOneConvexOnSamples) {
  for (const auto& f : battery(9, 24)) {
    const RocResult r = roc_sampled(f, 10000, 77);
    EXPECT_TRUE(r.passed()) << f.name();
    EXPECT_EQ(r.exact, f.exact_evaluable());
  }
}

TEST(RocSampled, FindsConcaveViolation) {
  const TestFunction concave(FunctionTag::Custom, "-|X|^2",
                             [](const Mat2d& x) { return -frobenius_sq(x); });
  const RocResult r = roc_sampled(concave, 100, 1);
  ASSERT_FALSE(r.passed());
  EXPECT_EQ(r.trials, 1);
  EXPECT_LT(r.violation->margin, 0);
}

TEST(CheckInequality, NullLagrangianAndNorm) {
  const Frame f = cubelam::testing::equal_coefficient_frame();
  const LaminateCertificate c = symmetric_laminate(f, Rational(1, 3));
  EXPECT_EQ(check_inequality(c.flattened, minus_det()), 0);
  EXPECT_GT(check_inequality(c.flattened, frobenius_norm()), 0);
  const auto dirac = AtomicMeasure<Rational>::dirac(Mat2q::Zero());
  for (const auto& fn : battery(1, 8)) EXPECT_EQ(check_inequality(dirac, fn), 0);
}

TEST(Suite, EqualCoefficientFrame) {
  const SuiteReport r = main_theorem_suite(cubelam::testing::equal_coefficient_frame(), battery(3, 24));
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.measure_matches);
  EXPECT_GE(r.min_margin, 0.0);
  EXPECT_GT(r.certificate_order, 7);
  EXPECT_EQ(r.rows.size(), 24U);
}

TEST(Suite, DegenerateFrameUsesDegeneratePath) {
  const Frame f = build_frame<Rational>(make_mat2<Rational>(1, 0, 0, 0), make_mat2<Rational>(0, 1, 0, 0),
                                        make_mat2<Rational>(0, 0, 1, 1));
  ASSERT_TRUE(f.degenerate);
  const SuiteReport r = main_theorem_suite(f, battery(4, 12));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.kind, ConstructionCase::Degenerate);
}

TEST(Suite, WrongMeasureIsReported) {
  const Frame f = cubelam::testing::equal_coefficient_frame();
  const LaminateCertificate c = symmetric_laminate(f, Rational(1, 2));
  const SuiteReport r = verify_certificate(c, battery(3, 6), symmetric_measure(f, Rational(1, 16)));
  EXPECT_FALSE(r.measure_matches);
  EXPECT_FALSE(r.passed());
}
