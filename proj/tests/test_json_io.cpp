#include "cubelam/json_io.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace cubelam;
using json::Json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(JsonIo, ScalarsByMode) {
  EXPECT_EQ(json::scalar<Rational>(Json("3/8"), ""), Rational(3, 8));
  EXPECT_EQ(json::scalar<Rational>(Json(-2), ""), Rational(-2));
  EXPECT_THROW(json::scalar<Rational>(Json(0.5), ""), InputError);
  EXPECT_DOUBLE_EQ(json::scalar<double>(Json(0.5), ""), 0.5);
  EXPECT_DOUBLE_EQ(json::scalar<double>(Json("1/4"), ""), 0.25);
  EXPECT_EQ(json::encode(Rational(6, 3)), Json("2"));
}

TEST(JsonIo, MatrixErrorsCarryPointer) {
  const Json bad = json::parse(R"({"C": [[[1, 0], [0, 0]], [[0, 0], [0, "x"]], [[1, 1], [1, 1]]]})");
  const std::string msg = error_of([&] { json::frame<Rational>(bad); });
  EXPECT_NE(msg.find("/C/1/1/1"), std::string::npos) << msg;
  const std::string shape = error_of([&] { json::mat2<Rational>(json::parse("[[1, 2]]"), "/m"); });
  EXPECT_NE(shape.find("/m"), std::string::npos) << shape;
}

TEST(JsonIo, SyntaxErrorsCarryOffset) {
  const std::string msg = error_of([] { json::parse("{\"C\": [1, 2"); });
  EXPECT_NE(msg.find("byte"), std::string::npos) << msg;
}

TEST(JsonIo, DeformationParsing) {
  const auto d = json::deformation<Rational>(
      json::parse(R"({"modes": [{"n": [1, 0], "a": [1, "1/2"]}, {"n": [1, 1], "c": "1/4"}]})"));
  ASSERT_EQ(d.size(), 2);
  EXPECT_EQ(d.modes[0].amplitude(1), Rational(1, 2));
  EXPECT_EQ(d.modes[1].phase, Rational(1, 4));
  EXPECT_THROW(json::deformation<Rational>(json::parse(R"({"modes": [{"n": [0, 0]}]})")), InputError);
  EXPECT_THROW(json::deformation<Rational>(json::parse(R"({"modes": [{"n": [0.5, 1]}]})")), InputError);
}

TEST(JsonIo, TreeRoundTrip) {
  const Frame f = cubelam::testing::equal_coefficient_frame();
  const Tree t = uniform_laminate(f);
  const Json j = json::encode_tree(t);
  const Tree back = json::tree<Rational>(j, "/tree");
  EXPECT_EQ(json::encode_tree(back), j);
  EXPECT_TRUE(validate_tree(back).valid);
}

TEST(JsonIo, CertificateRoundTrip) {
  std::mt19937_64 rng(41);
  for (auto kind : {cubelam::testing::FrameKind::Case1, cubelam::testing::FrameKind::Case2,
                    cubelam::testing::FrameKind::Degenerate}) {
    const Frame f = cubelam::testing::random_frame_of(rng, kind);
    const LaminateCertificate c = symmetric_laminate(f, Rational(2, 3));
    const Json j = json::encode_certificate(c);
    const LaminateCertificate back = json::certificate(j);
    EXPECT_EQ(back.alpha, c.alpha);
    EXPECT_EQ(json::encode_certificate(back), j);
  }
}

TEST(JsonIo, TamperedCertificateIsRejected) {
  const LaminateCertificate c = symmetric_laminate(cubelam::testing::equal_coefficient_frame(), Rational(1, 3));
  Json j = json::encode_certificate(c);
  j["alpha"] = "1/8";
  EXPECT_THROW(json::certificate(j), ConstructionError);

  j = json::encode_certificate(c);
  j["forest"]["components"][0]["tree"]["lambda"] = "1/7";
  EXPECT_THROW(json::certificate(j), ConstructionError);

  j = json::encode_certificate(c);
  j["frame"]["normalization"]["det_flip"] = true;
  EXPECT_THROW(json::certificate(j), ConstructionError);

  j = json::encode_certificate(c);
  j["schema_version"] = 99;
  EXPECT_THROW(json::certificate(j), InputError);
}
