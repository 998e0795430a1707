#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "graphbec/errors.hpp"
#include "graphbec/graph.hpp"
#include "graphbec/spectral.hpp"
#include "graphbec/statistics.hpp"
#include "graphbec/thermo_limit.hpp"
#include "graphbec/tonks.hpp"
#include "graphbec/vertex_conditions.hpp"
#include "oracles.hpp"

using namespace graphbec;
using std::numbers::pi;

TEST(LimitFreeEnergy, ZeroChemicalPotential) {
  const double expected = -(std::sqrt(pi) / (2.0 * pi)) * (1.0 - 1.0 / std::sqrt(2.0)) * 2.612375348685488;
  EXPECT_NEAR(oracle::limit_free_energy_series(1.0, 0.0), expected, 1e-14);
  EXPECT_NEAR(limit_free_energy_density(1.0, 0.0), oracle::limit_free_energy_series(1.0, 0.0), 1e-10);
}

TEST(LimitFreeEnergy, SeriesOracleBelowZero) {
  for (double beta : {0.5, 1.0, 2.0, 8.0}) {
    for (double mu : {-3.0, -1.0, -0.1, 0.0}) {
      EXPECT_NEAR(limit_free_energy_density(beta, mu), oracle::limit_free_energy_series(beta, mu),
                  1e-10)
          << beta << " " << mu;
    }
  }
}

TEST(LimitFreeEnergy, PositiveChemicalPotentialAgainstSimpson) {
  for (double beta : {1.0, 2.0}) {
    for (double mu : {0.5, 2.0}) {
      const double kf = std::sqrt(mu);
      auto g = [&](double k) {
        const double y = beta * (k * k - mu);
        return y > 0 ? std::log1p(std::exp(-y)) : -y + std::log1p(std::exp(y));
      };
      const double integral =
          oracle::simpson(g, 0.0, kf, 20000) + oracle::simpson(g, kf, kf + 12.0, 200000);
      EXPECT_NEAR(limit_free_energy_density(beta, mu), -integral / (pi * beta), 1e-10);
    }
  }
}

TEST(LimitFreeEnergy, Suppressed) {
  EXPECT_LE(std::abs(limit_free_energy_density(1.0, -40.0)), 1e-8);
  EXPECT_LT(std::abs(limit_free_energy_density(200.0, -0.5)), 1e-20);
  EXPECT_THROW(limit_free_energy_density(0.0, 0.0), Error);
}

TEST(FiniteFreeEnergy, SingleLevel) {
  Spectrum s;
  s.nonnegatives = {{1.0, 1}};
  s.total_length = 1.0;
  EXPECT_NEAR(finite_free_energy_density(s, 1.0, 0.0), -std::log1p(std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(finite_free_energy_density(s, 1.0, 0.0), -0.313262, 1e-6);
}

TEST(FiniteFreeEnergy, DirichletIntervalAgainstExplicitSum) {
  for (double l : {5.0, 50.0}) {
    for (double mu : {-1.0, 0.0, 1.5}) {
      const MetricGraph g = graphs::interval(l);
      const SecularSystem system(g, preset_dirichlet(g));
      const Spectrum s = thermal_spectrum(system, 1.0, 40.0, mu);
      EXPECT_NEAR(finite_free_energy_density(s, 1.0, mu), oracle::interval_fermi_free_energy(l, 1.0, mu),
                  1e-11);
    }
  }
}

TEST(FiniteFreeEnergy, ApproachesLimit) {
  const MetricGraph g = graphs::interval(50.0);
  const SecularSystem system(g, preset_dirichlet(g));
  const Spectrum s = thermal_spectrum(system, 1.0);
  EXPECT_LT(std::abs(finite_free_energy_density(s, 1.0, 0.0) + 0.215844), 2e-2);
}

TEST(FiniteFreeEnergy, VertexConditionIndependence) {
  const MetricGraph g = graphs::interval(200.0);
  const Spectrum d = thermal_spectrum(SecularSystem(g, preset_dirichlet(g)), 1.0);
  const Spectrum n = thermal_spectrum(SecularSystem(g, preset_neumann(g)), 1.0);
  EXPECT_LE(std::abs(finite_free_energy_density(d, 1.0, 0.0) - finite_free_energy_density(n, 1.0, 0.0)),
            1e-2);
}

TEST(FiniteFreeEnergy, InsufficientCutoff) {
  const MetricGraph g = graphs::interval(10.0);
  const Spectrum s = positive_spectrum(g, preset_dirichlet(g), 5.0);
  try {
    finite_free_energy_density(s, 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCutoff);
  }
}

TEST(Hardcore, PairSums) {
  const HardcoreSpectrum hc = hardcore_levels(std::vector<double>{1.0, 4.0, 9.0}, 2);
  EXPECT_EQ(hc.energies, (std::vector<double>{5.0, 10.0, 13.0}));
}

TEST(Hardcore, OneParticleIsIdentity) {
  const std::vector<double> levels{1.0, 4.0, 9.0, 16.0};
  EXPECT_EQ(hardcore_levels(levels, 1).energies, levels);
}

TEST(Hardcore, FermiSeaOnInterval) {
  const MetricGraph g = graphs::interval(pi);
  const Spectrum s = positive_spectrum(g, preset_dirichlet(g), 30.0);
  std::vector<double> levels;
  for (const Level& l : s.levels()) levels.push_back(l.energy);
  const HardcoreSpectrum hc = hardcore_levels(levels, 3);
  EXPECT_NEAR(hc.energies.front(), 14.0, 1e-9);
  EXPECT_EQ(hc.energies.size(), 10u);  // C(5, 3)
}

TEST(Hardcore, Errors) {
  try {
    hardcore_levels(std::vector<double>{1.0}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewLevels);
  }
  EXPECT_EQ(hardcore_levels({}, 0).energies, std::vector<double>{0.0});
}

TEST(Fermionization, ProductEqualsSum) {
  EXPECT_LE(grand_canonical_consistency(std::vector<double>{1.0, 2.0}, 1.0, 0.0), 1e-14);
  const double lhs = (1 + std::exp(-1.0)) * (1 + std::exp(-2.0));
  const double rhs = 1 + std::exp(-1.0) + std::exp(-2.0) + std::exp(-3.0);
  EXPECT_NEAR(lhs, rhs, 1e-15);
  std::vector<double> interval;
  for (int n = 1; n <= 6; ++n) interval.push_back(n * n);
  EXPECT_LE(grand_canonical_consistency(interval, 0.5, 1.0), 1e-12);
  EXPECT_EQ(grand_canonical_consistency({}, 1.0, 0.0), 0.0);
}

TEST(Fermionization, TruncationIsReported) {
  const std::vector<double> levels{0.0, 0.5, 1.0};
  EXPECT_GT(grand_canonical_consistency(levels, 1.0, 2.0, 1), 0.1);
}

TEST(Smoothness, DerivativeIsMinusDensity) {
  const FreeEnergyCurve c = free_energy_curve(1.0, -1.0, 1.0, 0.25);
  ASSERT_EQ(c.mu.size(), 9u);
  for (std::size_t i = 0; i < c.mu.size(); ++i) {
    const double mu = c.mu[i];
    auto occ = [&](double k) { return 1.0 / (std::exp(k * k - mu) + 1.0); };
    const double density = oracle::simpson(occ, 0.0, 12.0, 200000) / pi;
    EXPECT_NEAR(c.df_dmu[i], -density, 1e-5);
    if (i > 0) EXPECT_LT(c.df_dmu[i], c.df_dmu[i - 1]);
  }
}

TEST(Smoothness, RefinementAcrossZero) {
  for (double beta : {1.0, 2.0}) {
    const FreeEnergyCurve coarse = free_energy_curve(beta, -2.0, 2.0, 0.1);
    const FreeEnergyCurve fine = free_energy_curve(beta, -2.0, 2.0, 0.05);
    EXPECT_LE(second_derivative_refinement_gap(coarse, fine), 1e-4);
    EXPECT_LT(fine.jump_statistic(), coarse.jump_statistic());
  }
}

TEST(Smoothness, ScanValidatesGrid) {
  EXPECT_THROW(smoothness_scan(std::vector<double>{1.0}, std::vector<double>{0.0, 1.0}), Error);
  EXPECT_THROW(smoothness_scan(std::vector<double>{1.0},
                               std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 9}),
               Error);
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(-1.0 + 0.25 * i);
  const auto curves = smoothness_scan(std::vector<double>{1.0, 2.0}, grid);
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[1].mu.size(), 9u);
}
