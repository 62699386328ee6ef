#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kslope/error.hpp"
#include "kslope/quadrature.hpp"

using namespace kslope;

namespace {

ComplexPoly monomial(int k) {
  std::vector<Complex> c(static_cast<std::size_t>(k) + 1, 0.0);
  c.back() = 1.0;
  return ComplexPoly(c);
}

DegenerationConfig rnc(std::vector<std::int64_t> weights) {
  return {2, {monomial(0), monomial(1), monomial(2)}, std::move(weights), 0, ""};
}

DegenerationConfig infinity_zero() {
  return {2, {monomial(0), monomial(2), monomial(1)}, {1, 1, -2}, 0, ""};
}

// Off-centre anchor zero of order 2 at z = 0.5 with a nontrivial diagram.
DegenerationConfig shifted_collapse() {
  return {2, {monomial(0), ComplexPoly{-0.5, 1.0}, ComplexPoly{0.25, -1.0, 1.0}}, {2, -1, -1}, 0, ""};
}

// (1/pi) d/dz d/dzbar ln sum_j t^{2 a_j} |S_j|^2 by a centred 5-point
// Laplacian, written out independently of the library.
double fd_density(const DegenerationConfig& c, double t, Complex z) {
  auto f = [&](std::complex<long double> w) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < c.sections.size(); ++j) {
      std::complex<long double> v = 0.0L;
      const auto co = c.sections[j].coeffs();
      for (std::size_t k = co.size(); k-- > 0;)
        v = v * w + std::complex<long double>(co[k]);
      s += std::pow(static_cast<long double>(t), 2.0L * c.weights[j]) * std::norm(v);
    }
    return std::log(s);
  };
  auto lap = [&](long double h) {
    const std::complex<long double> w(z);
    const std::complex<long double> dx(h, 0), dy(0, h);
    return (f(w + dx) + f(w - dx) + f(w + dy) + f(w - dy) - 4.0L * f(w)) / (h * h);
  };
  // Richardson step removes the O(h^2) term, which matters near a zero
  const long double h = 2e-4L;
  const long double l = (4.0L * lap(h / 2) - lap(h)) / 3.0L;
  return static_cast<double>(l / 4.0L / std::numbers::pi_v<long double>);
}

}  // namespace

TEST(LogSum, Examples) {
  EXPECT_EQ(log_sum({{ComplexPoly{1.0}}, {0.0}}, Complex(3, 4)), 0.0);
  const WeightedSectionSum s{{ComplexPoly{1.0}, monomial(1)}, {0.0, 0.0}};
  EXPECT_EQ(log_sum(s, 0.0), 0.0);
  EXPECT_NEAR(log_sum(s, 1.0), std::log(2.0), 1e-15);
}

TEST(LogSum, SurvivesExtremeWeights) {
  // t^{2q} with q = 400 at t = 0.1 underflows without the shift
  const WeightedSectionSum s{{ComplexPoly{1.0}, monomial(1)}, {400 * std::log(0.1), 0.0}};
  EXPECT_NEAR(log_sum(s, 0.5), std::log(0.25), 1e-12);
  EXPECT_NEAR(log_sum(s, 0.0), 800 * std::log(0.1), 1e-9);
}

TEST(LogSum, AllTermsZeroThrows) {
  try {
    log_sum({{monomial(1), monomial(2)}, {0.0, 0.0}}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllTermsUnderflow);
  }
}

TEST(LogLaplacian, Examples) {
  const WeightedSectionSum s{{ComplexPoly{1.0}, monomial(1)}, {0.0, 0.0}};
  EXPECT_NEAR(log_laplacian(s, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(log_laplacian(s, Complex(0.6, 0.8)), 0.25, 1e-15);
  EXPECT_EQ(log_laplacian({{ComplexPoly{2.0}}, {0.0}}, Complex(0.3, 0.1)), 0.0);
}

TEST(Phi, Examples) {
  const auto trivial = rnc({0, 0, 0});
  for (Complex z : {Complex(0), Complex(0.3, 0.2), Complex(0.9, -0.4)}) {
    EXPECT_EQ(phi(trivial, 0.01, Chart::kStandard, z), 0.0);
    EXPECT_EQ(phi(rnc({2, -1, -1}), 1.0, Chart::kStandard, z), 0.0);
  }
  EXPECT_NEAR(phi(rnc({2, -1, -1}), 0.1, Chart::kStandard, 0.0), std::log(1e-4), 1e-12);
}

TEST(OmegaDensity, MatchesFiniteDifferenceOracle) {
  for (const auto& c : {rnc({2, -1, -1}), infinity_zero(), shifted_collapse()}) {
    for (double t : {1.0, 0.3, 0.05}) {
      for (Complex z : {Complex(0.2, 0.1), Complex(-0.7, 0.4), Complex(0.45, -0.05)}) {
        const double got = omega_density(c, t, Chart::kStandard, z);
        EXPECT_NEAR(got, fd_density(c, t, z), 2e-6 * std::max(1.0, got)) << "t=" << t << " z=" << z;
      }
    }
  }
}

TEST(OmegaDensity, FubiniStudyOfDegreeOne) {
  const DegenerationConfig line{1, {monomial(0), monomial(1)}, {0, 0}, 0, ""};
  for (double r : {0.0, 0.5, 1.0, 2.0})
    EXPECT_NEAR(omega_density(line, 1.0, Chart::kStandard, r),
                1.0 / (std::numbers::pi * std::pow(1 + r * r, 2)), 1e-15);
}

TEST(OmegaDensity, AtTEqualOneIsReference) {
  const auto c = shifted_collapse();
  const ChartFields f(chart_sections(c, Chart::kStandard));
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.3, 0.9)})
    EXPECT_NEAR(omega_density(c, 1.0, Chart::kStandard, z), std::exp(f.reference(z).log_rho) / std::numbers::pi, 1e-15);
}

TEST(RicciDensity, RoundSphere) {
  const DegenerationConfig line{1, {monomial(0), monomial(1)}, {0, 0}, 0, ""};
  for (double r : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(ricci_density(line, Chart::kStandard, r), 2.0 * omega_density(line, 1.0, Chart::kStandard, r), 1e-14);
  }
  EXPECT_NEAR(ricci_density(line, Chart::kStandard, 0.0) / omega_density(line, 1.0, Chart::kStandard, 0.0),
              ricci_density(line, Chart::kStandard, Complex(0.6, 0.8)) /
                  omega_density(line, 1.0, Chart::kStandard, Complex(0.6, 0.8)),
              1e-14);
}

TEST(RicciDensity, MatchesFiniteDifferenceOfLogDensity) {
  const auto c = shifted_collapse();
  auto log_rho = [&](Complex z) { return std::log(omega_density(c, 1.0, Chart::kStandard, z)); };
  const double h = 1e-3;
  for (Complex z : {Complex(0.1, 0.3), Complex(0.8, -0.2)}) {
    const double lap = (log_rho(z + h) + log_rho(z - h) + log_rho(z + Complex(0, h)) +
                        log_rho(z - Complex(0, h)) - 4 * log_rho(z)) / (h * h);
    EXPECT_NEAR(ricci_density(c, Chart::kStandard, z), -lap / 4 / std::numbers::pi, 1e-5);
  }
}

TEST(ChartConsistency, UnitCircleSeenFromBothCharts) {
  for (const auto& c : {rnc({2, -1, -1}), infinity_zero(), shifted_collapse()}) {
    for (double theta : {0.0, 0.7, 2.0, 4.5}) {
      const Complex z = std::polar(1.0, theta), w = 1.0 / z;
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };
      EXPECT_LT(rel(phi(c, 0.1, Chart::kStandard, z), phi(c, 0.1, Chart::kInfinity, w)), 1e-9);
      EXPECT_LT(rel(omega_density(c, 0.1, Chart::kStandard, z), omega_density(c, 0.1, Chart::kInfinity, w)), 1e-9);
      EXPECT_LT(rel(ricci_density(c, Chart::kStandard, z), ricci_density(c, Chart::kInfinity, w)), 1e-9);
    }
  }
}

class WorkedConfig : public ::testing::TestWithParam<int> {
 protected:
  DegenerationConfig config() const {
    switch (GetParam()) {
      case 0: return rnc({1, 0, -1});
      case 1: return rnc({2, -1, -1});
      case 2: return infinity_zero();
      default: return shifted_collapse();
    }
  }
};

TEST_P(WorkedConfig, VolumeRouteAgreementAndGaussBonnet) {
  const auto c = config();
  const QuadratureGrid grid(c, GridParams{});
  EXPECT_NEAR(ricci_total(grid), 2.0, 1e-4);
  for (double t : {1.0, 0.1, 0.01, 0.001}) {
    const auto s = evaluate_energies(c, t, grid);
    EXPECT_NEAR(s.volume, 2.0, 2e-5) << "t=" << t;
    EXPECT_LE(std::abs(s.F0_direct - s.F0_via_J), 1e-5 * std::max(1.0, std::abs(s.F0_direct)));
    if (t == 1.0) {
      EXPECT_EQ(s.nu, 0.0);
      EXPECT_EQ(s.F0_direct, 0.0);
      EXPECT_EQ(s.J, 0.0);
    }
  }
}

TEST_P(WorkedConfig, PhaseIsIgnored) {
  const auto c = config();
  const QuadratureGrid grid(c, GridParams{});
  const auto a = evaluate_energies(c, 0.05, grid);
  const auto b = evaluate_energies(c, std::polar(0.05, 2.1), grid);
  EXPECT_EQ(a.nu, b.nu);
  EXPECT_EQ(a.F0_direct, b.F0_direct);
  EXPECT_EQ(a.volume, b.volume);
}

TEST_P(WorkedConfig, ThreadCountDoesNotChangeResults) {
  const auto c = config();
  GridParams one, many;
  one.threads = 1;
  many.threads = 4;
  const QuadratureGrid g1(c, one), g4(c, many);
  const auto a = evaluate_energies(c, 0.01, g1);
  const auto b = evaluate_energies(c, 0.01, g4);
  EXPECT_EQ(a.nu, b.nu);
  EXPECT_EQ(a.F0_direct, b.F0_direct);
  EXPECT_EQ(a.F0_via_J, b.F0_via_J);
  EXPECT_EQ(a.volume, b.volume);
}

INSTANTIATE_TEST_SUITE_P(Configs, WorkedConfig, ::testing::Values(0, 1, 2, 3));

TEST(Energies, TrivialSubgroupIsZero) {
  const auto c = rnc({0, 0, 0});
  const QuadratureGrid grid(c, GridParams{});
  for (double t : {0.1, 0.001}) {
    const auto s = evaluate_energies(c, t, grid);
    EXPECT_EQ(s.nu, 0.0);
    EXPECT_EQ(s.F0_direct, 0.0);
    EXPECT_EQ(s.F0_via_J, 0.0);
  }
}

TEST(Energies, DegreeOneTotalMass) {
  const DegenerationConfig line{1, {monomial(0), monomial(1)}, {1, -1}, 0, ""};
  const QuadratureGrid grid(line, GridParams{});
  EXPECT_NEAR(evaluate_energies(line, 1.0, grid).volume, 1.0, 1e-10);
  EXPECT_NEAR(evaluate_energies(line, 0.01, grid).volume, 1.0, 1e-8);
}

TEST(Energies, BelowDesignMinimumIsUnresolved) {
  const auto c = rnc({2, -1, -1});
  const QuadratureGrid grid(c, GridParams{});
  try {
    evaluate_energies(c, 1e-4, grid);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridUnresolved);
  }
}

TEST(Grid, EveryAnnulusHasRadialNodes) {
  for (const auto& c : {rnc({2, -1, -1}), infinity_zero(), shifted_collapse()}) {
    const QuadratureGrid grid(c, GridParams{});
    for (std::size_t k = 0; k < grid.zeros().size(); ++k) {
      const auto& dg = grid.zeros()[k].diagram;
      for (double t : {0.1, 0.01, 0.001})
        for (int a = 1; a <= dg.num_faces(); ++a)
          EXPECT_GE(grid.radial_nodes_in_annulus(static_cast<int>(k), a, t), 8);
    }
  }
}

TEST(Grid, RejectsHigherGenus) {
  auto c = rnc({2, -1, -1});
  c.genus = 1;
  try {
    QuadratureGrid grid(c, GridParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedGenus);
  }
}

TEST(AnnulusOracle, OnVertexMassIsExact) {
  const std::vector<DiagramPoint> pts{{0, Rational(3)}, {1, Rational(0)}, {2, Rational(0)}};
  const auto d = build_diagram(pts);
  const std::vector<DiagramPoint> on{{1, Rational(0)}};
  const double got = annulus_oracle(on, 1, 0.01, d);
  EXPECT_NEAR(got, 3.0 * std::log(100.0), 1e-10);
  EXPECT_NEAR(got, 13.8, 0.1);
}

TEST(AnnulusOracle, EmptyListIsExactRadialIntegral) {
  const std::vector<DiagramPoint> pts{{0, Rational(3)}, {1, Rational(1)}, {3, Rational(0)}};
  const auto d = build_diagram(pts);
  ASSERT_EQ(d.num_faces(), 2);
  for (double t : {0.1, 0.001})
    EXPECT_NEAR(annulus_oracle({}, 1, t, d), std::log(1 / t) * to_double(d.slope(1) - d.slope(2)), 1e-10);
}

TEST(AnnulusOracle, OffVertexStaysBounded) {
  const std::vector<DiagramPoint> pts{{0, Rational(3)}, {1, Rational(0)}};
  const auto d = build_diagram(pts);
  const std::vector<DiagramPoint> off_at_1{{0, Rational(3)}};  // compared with V_1
  const std::vector<DiagramPoint> off_at_0{{1, Rational(0)}};  // compared with V_0
  for (double t : {0.1, 0.01, 0.001}) {
    EXPECT_LT(annulus_oracle(off_at_1, 1, t, d), 0.5 + 1e-9);
    EXPECT_LT(annulus_oracle(off_at_0, 0, t, d), 0.5 + 1e-9);
  }
}

TEST(AnnulusOracle, DivergesAtOriginWithoutDecay) {
  const std::vector<DiagramPoint> pts{{0, Rational(3)}, {1, Rational(0)}};
  const auto d = build_diagram(pts);
  try {
    annulus_oracle(std::vector<DiagramPoint>{{0, Rational(3)}}, 0, 0.1, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergentAnnulus);
  }
}

TEST(Sample, Examples) {
  const auto c = rnc({2, -1, -1});
  EXPECT_TRUE(sample(c, std::vector<double>{}, GridParams{}).empty());

  const auto one = sample(c, std::vector<double>{1.0}, GridParams{});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].nu, 0.0);
  EXPECT_EQ(one[0].F0_direct, 0.0);
  EXPECT_EQ(one[0].J, 0.0);
  EXPECT_NEAR(one[0].volume, 2.0, 1e-10);

  const auto two = sample(c, std::vector<double>{0.1, 0.05}, GridParams{});
  ASSERT_EQ(two.size(), 2u);
  for (const auto& s : two) EXPECT_NEAR(s.volume, 2.0, 2e-5);
}

TEST(Sample, FailedSamplesAreRecorded) {
  const auto c = rnc({2, -1, -1});
  const auto out = sample(c, std::vector<double>{0.1, 1e-4}, GridParams{});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_TRUE(out[0].ok());
  ASSERT_FALSE(out[1].ok());
  EXPECT_EQ(*out[1].error, ErrorCode::kGridUnresolved);
}

TEST(Sample, ScheduleMustDecrease) {
  const auto c = rnc({2, -1, -1});
  EXPECT_THROW(sample(c, std::vector<double>{0.01, 0.1}, GridParams{}), Error);
  EXPECT_THROW(sample(c, std::vector<double>{1.5}, GridParams{}), Error);
}

TEST(PairwiseSum, FixedOrderAndExactOnIntegers) {
  std::vector<double> v;
  for (int k = 1; k <= 1000; ++k) v.push_back(k);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}
