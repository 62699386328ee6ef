#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "kslope/error.hpp"
#include "kslope/experiment.hpp"

using namespace kslope;

namespace {

std::vector<EnergySample> affine(double slope, double intercept, int n = 5) {
  std::vector<EnergySample> out;
  for (int k = 2; k < 2 + n; ++k) {
    EnergySample s;
    s.t = std::pow(10.0, -0.5 * k);
    s.nu = slope * std::log(1 / s.t) + intercept;
    s.F0_direct = -slope * std::log(1 / s.t);
    s.volume = 2.0;
    out.push_back(s);
  }
  return out;
}

FitResult converged_fit(double slope) {
  FitResult f;
  f.slope = slope;
  f.stepwise_slopes = {slope, slope};
  f.converged = true;
  return f;
}

SlopePrediction prediction(double nu, double futaki) {
  SlopePrediction p;
  p.mabuchi_coefficient = nu;
  p.futaki_coefficient = futaki;
  return p;
}

ComplexPoly monomial(int k) {
  std::vector<Complex> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return ComplexPoly(c);
}

}  // namespace

TEST(FitSlope, ExactAffineData) {
  const auto f = fit_slope(affine(3.0, 7.0), Functional::kNu);
  EXPECT_NEAR(f.slope, 3.0, 1e-12);
  EXPECT_NEAR(f.intercept, 7.0, 1e-12);
  EXPECT_LT(f.max_residual, 1e-12);
  EXPECT_EQ(f.stepwise_slopes.size(), 4u);
  for (double s : f.stepwise_slopes) EXPECT_NEAR(s, 3.0, 1e-12);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(fit_slope(affine(3.0, 7.0), Functional::kFutaki).slope, -3.0, 1e-12);
}

TEST(FitSlope, ConstantData) {
  const auto f = fit_slope(affine(0.0, 4.2), Functional::kNu);
  EXPECT_NEAR(f.slope, 0.0, 1e-14);
  EXPECT_NEAR(f.intercept, 4.2, 1e-12);
}

TEST(FitSlope, TooFewSamples) {
  try {
    fit_slope(affine(1.0, 0.0, 2), Functional::kNu);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSamples);
  }
}

TEST(FitSlope, DetectsUnsettledSlopes) {
  auto s = affine(1.0, 0.0);
  s.back().nu += 0.5;
  EXPECT_FALSE(fit_slope(s, Functional::kNu).converged);
}

TEST(FitSlope, FailedSampleIsRethrown) {
  auto s = affine(1.0, 0.0);
  s[2].error = ErrorCode::kDegenerateEmbedding;
  try {
    fit_slope(s, Functional::kNu);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateEmbedding);
  }
}

TEST(Compare, Examples) {
  auto r = compare(prediction(1.5, 0.0), converged_fit(1.48), converged_fit(0.0), 0.03);
  EXPECT_TRUE(r.nu.pass);
  EXPECT_NEAR(r.nu.rel_error, 0.02 / 1.5, 1e-12);

  auto near_zero = converged_fit(0.004);
  near_zero.intercept = 1.0;
  r = compare(prediction(0.0, 0.0), near_zero, converged_fit(0.0), 0.03);
  EXPECT_TRUE(r.nu.pass);
  EXPECT_TRUE(r.pass);

  r = compare(prediction(1.0, -0.5), converged_fit(1.0), converged_fit(-0.4), 0.03);
  EXPECT_FALSE(r.futaki.pass);
  EXPECT_FALSE(r.pass);
}

TEST(Compare, UsesLastStepwiseSlope) {
  FitResult f = converged_fit(1.5);
  f.slope = 1.2;  // biased least-squares slope
  const auto r = compare(prediction(1.5, 0.0), f, converged_fit(0.0), 0.03);
  EXPECT_EQ(r.nu.measured, 1.5);
  EXPECT_TRUE(r.nu.pass);
}

TEST(Compare, UnconvergedUnlessOverridden) {
  FitResult f = converged_fit(1.5);
  f.stepwise_slopes = {1.2, 1.5};
  f.converged = false;
  try {
    compare(prediction(1.5, 0.0), f, converged_fit(0.0), 0.03);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnconvergedFit);
  }
  EXPECT_TRUE(compare(prediction(1.5, 0.0), f, converged_fit(0.0), 0.03, true).pass);
}

TEST(Compare, MonotoneInTolerance) {
  for (double measured : {1.3, 1.45, 1.5, 1.6, 2.5}) {
    bool passed = false;
    for (double tol : {0.001, 0.01, 0.03, 0.1, 0.5, 1.0}) {
      const bool now = compare(prediction(1.5, 0.0), converged_fit(measured), converged_fit(0.0), tol).nu.pass;
      if (passed) EXPECT_TRUE(now) << measured << " " << tol;
      passed = passed || now;
    }
  }
}

TEST(Report, JsonRoundTrip) {
  DegenerationConfig c{2, {monomial(0), monomial(1), monomial(2)}, {2, -1, -1}, 0, "round trip"};
  RunEnvironment env;
  env.t_schedule = {0.1, 0.0316, 0.01};
  SlopeReport r = compare(predict(c), fit_slope(affine(1.5, 0.3, 3), Functional::kNu),
                          fit_slope(affine(0.5, 0.0, 3), Functional::kFutaki), 0.03, true);
  r.config = c;
  r.config_digest = config_digest(c);
  r.samples = affine(1.5, 0.3, 3);
  EnergySample failed;
  failed.t = 0.001;
  failed.error = ErrorCode::kGridUnresolved;
  failed.error_message = "GridUnresolved: below design minimum";
  r.samples.push_back(failed);
  r.environment = env;
  r.environment.override_unconverged = true;

  const std::string json = serialize_report(r, ReportFormat::kJson);
  const SlopeReport back = parse_report(json);
  EXPECT_EQ(back, r);
  EXPECT_EQ(serialize_report(back, ReportFormat::kJson), json);
}

TEST(Report, TopLevelFieldsAndDeterminism) {
  SlopeReport r = compare(prediction(0.0, 0.0), converged_fit(0.0), converged_fit(0.0), 0.03);
  const std::string a = serialize_report(r, ReportFormat::kJson);
  const std::string b = serialize_report(r, ReportFormat::kJson);
  EXPECT_EQ(a, b);
  std::size_t last = 0;
  for (const char* key : {"\"schema_version\"", "\"config\"", "\"prediction\"", "\"fits\"", "\"verdicts\"",
                          "\"environment\""}) {
    const auto pos = a.find(key);
    ASSERT_NE(pos, std::string::npos) << key;
    EXPECT_GT(pos, last);
    last = pos;
  }
}

TEST(Report, EmptyScheduleIsStillValid) {
  SlopeReport r = compare(prediction(0.0, 0.0), converged_fit(0.0), converged_fit(0.0), 0.03);
  const std::string json = serialize_report(r, ReportFormat::kJson);
  EXPECT_NE(json.find("\"samples\": []"), std::string::npos);
  EXPECT_TRUE(parse_report(json).samples.empty());
}

TEST(Report, CsvRowCount) {
  SlopeReport r = compare(prediction(1.5, -0.5), converged_fit(1.5), converged_fit(-0.5), 0.03);
  r.samples = affine(1.5, 0.0, 5);
  const std::string csv = serialize_report(r, ReportFormat::kCsv);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  // header + 2 per sample, blank, summary header + 2 rows
  ASSERT_EQ(lines.size(), 1u + 10u + 1u + 3u);
  EXPECT_EQ(lines[0], "t,functional,value,volume,wall_ms");
  EXPECT_EQ(lines[11], "");
  EXPECT_EQ(lines[12], "functional,predicted,measured,abs_error,rel_error,pass");
  EXPECT_EQ(lines[13].substr(0, 7), "nu,1.5,");
}

TEST(Report, MalformedInputIsReportFormat) {
  try {
    parse_report("{\"schema_version\": 1}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kReportFormat);
  }
  EXPECT_THROW(parse_report("not json"), Error);
}

TEST(ConfigDigest, StableAndSensitive) {
  DegenerationConfig c{2, {monomial(0), monomial(1), monomial(2)}, {2, -1, -1}, 0, ""};
  const auto d = config_digest(c);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_EQ(config_digest(c), d);
  c.weights = {1, 0, -1};
  EXPECT_NE(config_digest(c), d);
}
