#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "graphbec/errors.hpp"
#include "graphbec/graph.hpp"
#include "graphbec/spectral.hpp"
#include "graphbec/statistics.hpp"
#include "graphbec/vertex_conditions.hpp"
#include "oracles.hpp"

using namespace graphbec;

namespace {

// Complete level list: cutoff 0 means no tail is added.
Spectrum toy(std::vector<double> energies, double length = 1.0) {
  Spectrum s;
  for (double e : energies) s.nonnegatives.push_back({e, 1});
  s.total_length = length;
  return s;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no graphbec::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(BoseDensity, SingleLevel) {
  EXPECT_NEAR(bose_density(toy({1.0}), 1.0, 0.0), 1.0 / (std::exp(1.0) - 1.0), 1e-15);
  EXPECT_NEAR(bose_density(toy({1.0}), 1.0, 0.0), 0.581977, 1e-6);
}

TEST(BoseDensity, DominatedByGround) {
  EXPECT_NEAR(bose_density(toy({0.0, 1e6}), 1.0, -1.0), 1.0 / (std::exp(1.0) - 1.0), 1e-15);
}

TEST(BoseDensity, NeumannIntervalAgainstExplicitSum) {
  const MetricGraph g = graphs::interval(1.0);
  const double beta = 1.0;
  const double mu = -0.5;
  const Spectrum s = positive_spectrum(g, preset_neumann(g), 60.0 / beta);
  const double expected = oracle::interval_bose_density(1.0, beta, mu, 0, 10000);
  EXPECT_NEAR(bose_density(s, beta, mu), expected, 1e-10 * expected);
}

TEST(BoseDensity, LongNeumannIntervalUsesTail) {
  const MetricGraph g = graphs::interval(20.0);
  const Spectrum s = positive_spectrum(g, preset_neumann(g), 25.0);
  const double expected = oracle::interval_bose_density(20.0, 1.0, -0.2, 0, 20000);
  EXPECT_NEAR(bose_density(s, 1.0, -0.2), expected, 1e-9 * expected);
}

TEST(BoseDensity, Errors) {
  EXPECT_EQ(code_of([] { bose_density(toy({1.0}), 1.0, 1.0); }),
            ErrorCode::ChemicalPotentialAboveGroundState);
  EXPECT_EQ(code_of([] { bose_density(toy({1.0}), 1.0, 2.0); }),
            ErrorCode::ChemicalPotentialAboveGroundState);
  // a cutoff barely above the ground level leaves a large Weyl tail
  const MetricGraph g = graphs::interval(10.0);
  const Spectrum s = positive_spectrum(g, preset_neumann(g), 0.5);
  EXPECT_EQ(code_of([&] { bose_density(s, 1.0, -0.1); }), ErrorCode::InsufficientCutoff);
}

TEST(BoseDensity, DivergesAtGroundState) {
  const Spectrum s = toy({0.0, 1.0, 4.0});
  double previous = 0.0;
  for (double gap : {1.0, 1e-2, 1e-4, 1e-6}) {
    const double rho = bose_density(s, 1.0, -gap);
    EXPECT_GT(rho, previous);
    previous = rho;
  }
  EXPECT_GT(previous, 1e5);
}

TEST(ChemicalPotential, InvertsSingleLevel) {
  const double mu = solve_chemical_potential(toy({1.0}), 1.0, 1.0 / (std::exp(1.0) - 1.0));
  EXPECT_NEAR(mu, 0.0, 1e-10);
}

TEST(ChemicalPotential, MonotoneInDensity) {
  const Spectrum s = toy({0.0, 0.5, 1.5, 3.0}, 2.0);
  double previous = -1e300;
  for (double rho : {0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
    const double mu = solve_chemical_potential(s, 1.0, rho);
    EXPECT_GT(mu, previous);
    EXPECT_LT(mu, 0.0);
    previous = mu;
  }
}

TEST(ChemicalPotential, NeumannRoundTrip) {
  const MetricGraph g = graphs::interval(100.0);
  const Spectrum s = positive_spectrum(g, preset_neumann(g), 40.0);
  const double mu = solve_chemical_potential(s, 1.0, 1.0);
  EXPECT_LT(mu, 0.0);
  EXPECT_NEAR(bose_density(s, 1.0, mu), 1.0, 1e-10);
}

TEST(CondensateFraction, SingleLevelIsOne) {
  const Spectrum s = toy({0.3}, 5.0);
  const GasObservables gas = grand_canonical_state(s, 2.0, 0.7);
  EXPECT_NEAR(gas.condensate_fraction, 1.0, 1e-10);
}

TEST(CondensateFraction, DecreasesWithTemperature) {
  const Spectrum s = toy({0.0, 1.0, 2.0});
  double previous = 2.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double f = grand_canonical_state(s, 1.0 / t, 1.0).condensate_fraction;
    EXPECT_LT(f, previous);
    previous = f;
  }
  EXPECT_GT(previous, 1.0 / 3.0 - 0.1);
}

TEST(Canonical, TwoLevelExample) {
  const auto levels = as_levels(std::vector<double>{0.0, 1.0});
  const CanonicalTable t(levels, 2, 1.0);
  const double z2 = 1.0 + std::exp(-1.0) + std::exp(-2.0);
  EXPECT_NEAR(t.partition(2), z2, 1e-15);
  EXPECT_NEAR(t.partition(2), 1.503215, 1e-6);
  EXPECT_NEAR(t.partition(0), 1.0, 0.0);
}

TEST(Canonical, SingleLevelPartitionIsOne) {
  const auto levels = as_levels(std::vector<double>{0.0});
  const CanonicalTable t(levels, 7, 0.4);
  for (std::size_t n = 0; n <= 7; ++n) EXPECT_NEAR(t.partition(n), 1.0, 1e-15);
  EXPECT_NEAR(penrose_onsager_lambda(levels, 5, 1.0), 1.0, 1e-15);
}

TEST(Canonical, ThreeLevelsAgainstEnumeration) {
  const std::vector<double> e{0.0, 1.0, 2.0};
  const auto ref = oracle::enumerate_bosons(e, 3, 0.7);
  const CanonicalTable t(as_levels(e), 3, 0.7);
  EXPECT_NEAR(t.partition(3), ref.partition, 1e-12);
}

TEST(Canonical, PenroseOnsagerTwoLevels) {
  // <n_0> / 2 = ((1 + e^-1) + 1) / (1 + e^-1 + e^-2) / 2
  const double expected =
      (2.0 + std::exp(-1.0)) / (1.0 + std::exp(-1.0) + std::exp(-2.0)) / 2.0;
  const double lambda = penrose_onsager_lambda(as_levels(std::vector<double>{0.0, 1.0}), 2, 1.0);
  EXPECT_NEAR(lambda, expected, 1e-14);
  EXPECT_NEAR(lambda, oracle::enumerate_bosons({0.0, 1.0}, 2, 1.0).occupations[0] / 2.0, 1e-14);
}

TEST(Canonical, GroundSaturationAtLowTemperature) {
  const auto levels = as_levels(std::vector<double>{-2.0, 0.5, 1.0, 3.0});
  EXPECT_NEAR(penrose_onsager_lambda(levels, 10, 60.0), 1.0, 1e-12);
}

TEST(Canonical, NegativeGroundStateShift) {
  // a deep negative level would overflow exp(-beta E N) without the shift
  const std::vector<double> e{-50.0, -49.0, -10.0};
  const CanonicalTable t(as_levels(e), 40, 20.0);
  EXPECT_TRUE(std::isfinite(t.log_partition(40)));
  // enumerate on shifted levels, restore e^{-beta N (-50)} in the log
  const auto ref = oracle::enumerate_bosons({0.0, 1.0, 40.0}, 4, 20.0);
  EXPECT_NEAR(t.log_partition(4) / (4 * 20.0 * 50.0), (std::log(ref.partition) + 4 * 20.0 * 50.0) / (4 * 20.0 * 50.0), 1e-14);
}

TEST(Canonical, OccupationsSumToN) {
  const auto levels = as_levels(std::vector<double>{0.0, 0.1, 0.7, 1.1, 2.0, 5.0});
  const CanonicalTable t(levels, 30, 0.8);
  for (std::size_t n : {1u, 5u, 17u, 30u}) {
    const auto occ = t.occupations(n);
    double total = 0.0;
    for (double o : occ) total += o;
    EXPECT_NEAR(total, double(n), 1e-10);
  }
}

TEST(Canonical, DegeneracyEquivalence) {
  const std::vector<Level> merged{{0.0, 1}, {0.4, 2}, {1.3, 1}};
  const auto split = as_levels(std::vector<double>{0.0, 0.4, 0.4, 1.3});
  for (double beta : {0.3, 1.0, 3.0}) {
    const CanonicalTable a(merged, 6, beta);
    const CanonicalTable b(split, 6, beta);
    for (std::size_t n = 0; n <= 6; ++n) EXPECT_NEAR(a.partition(n), b.partition(n), 1e-12);
    const auto oa = a.occupations(6);
    const auto ob = b.occupations(6);
    EXPECT_NEAR(oa[1], ob[1], 1e-12);
    EXPECT_NEAR(oa[1], ob[2], 1e-12);
    EXPECT_NEAR(penrose_onsager_lambda(merged, 6, beta), penrose_onsager_lambda(split, 6, beta),
                1e-12);
  }
  Spectrum sm;
  sm.nonnegatives = merged;
  sm.total_length = 3.0;
  Spectrum ss;
  ss.nonnegatives = split;
  ss.total_length = 3.0;
  EXPECT_NEAR(bose_density(sm, 1.0, -0.2), bose_density(ss, 1.0, -0.2), 1e-12);
}

TEST(Canonical, Errors) {
  const auto levels = as_levels(std::vector<double>{0.0, 1.0});
  EXPECT_EQ(code_of([&] { CanonicalTable(levels, 0, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { CanonicalTable({}, 3, 1.0); }), ErrorCode::TooFewLevels);
  EXPECT_EQ(code_of([&] { CanonicalTable(levels, 3, 1.0).partition(4); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { penrose_onsager_lambda(levels, 0, 1.0); }), ErrorCode::InvalidArgument);
}
