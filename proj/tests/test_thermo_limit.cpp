#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "graphbec/errors.hpp"
#include "graphbec/graph.hpp"
#include "graphbec/thermo_limit.hpp"
#include "graphbec/tonks.hpp"
#include "graphbec/vertex_conditions.hpp"
#include "oracles.hpp"

using namespace graphbec;

namespace {

VertexConditions star_centre(const MetricGraph& g, double alpha) {
  std::vector<double> alphas(g.vertex_count(), 0.0);
  alphas[0] = alpha;
  return preset_delta(g, alphas);
}

}  // namespace

TEST(Classify, Verdicts) {
  const BecThresholds t;
  EXPECT_EQ(classify_fractions(std::vector<double>{0.2, 0.05, 0.01}, t), BecVerdict::Vanishing);
  EXPECT_EQ(classify_fractions(std::vector<double>{0.2, 0.05, 0.03}, t), BecVerdict::Indeterminate);
  EXPECT_EQ(classify_fractions(std::vector<double>{0.2, 0.2, 0.01}, t), BecVerdict::Indeterminate);
  EXPECT_EQ(classify_fractions(std::vector<double>{0.86, 0.855, 0.857}, t), BecVerdict::Persistent);
  EXPECT_EQ(classify_fractions(std::vector<double>{0.9, 0.7, 0.6}, t), BecVerdict::Indeterminate);
  EXPECT_EQ(classify_fractions({}, t), BecVerdict::Indeterminate);
  EXPECT_EQ(to_string(BecVerdict::Vanishing), "vanishing");
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsFailure) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t i) {
                              if (i == 7) throw Error(ErrorCode::NoConvergence, "boom");
                            }),
               Error);
}

TEST(GroundStateSweep, StarLimit) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  const std::vector<double> etas{1.0, 4.0, 16.0};
  const auto records = ground_state_sweep(g, star_centre(g, -3.0), etas);
  ASSERT_EQ(records.size(), 3u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double kappa = oracle::kappa_tanh_root(1.0, etas[i]);
    EXPECT_NEAR(records[i].ground_energy, -kappa * kappa, 1e-10);
    EXPECT_EQ(records[i].negative_count, 1u);
    if (i > 0) EXPECT_LT(*records[i].ground_residual, *records[i - 1].ground_residual);
  }
  EXPECT_NEAR(records[0].ground_energy, -1.43924, 1e-4);
}

TEST(GroundStateSweep, KirchhoffGroundIsZero) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  const std::vector<double> etas{1.0, 10.0};
  for (const auto& r : ground_state_sweep(g, preset_kirchhoff(g), etas)) {
    EXPECT_NEAR(r.ground_energy, 0.0, 1e-12);
    EXPECT_EQ(r.negative_count, 0u);
  }
}

TEST(GroundStateSweep, RejectsBadEtas) {
  const MetricGraph g = graphs::interval(1.0);
  EXPECT_THROW(ground_state_sweep(g, preset_dirichlet(g), std::vector<double>{2.0, 1.0}), Error);
  EXPECT_THROW(ground_state_sweep(g, preset_dirichlet(g), std::vector<double>{}), Error);
  EXPECT_THROW(ground_state_sweep(g, preset_dirichlet(g), std::vector<double>{0.0, 1.0}), Error);
}

TEST(BecSweep, KirchhoffIntervalVanishes) {
  const MetricGraph g = graphs::interval(1.0);
  const std::vector<double> etas{10.0, 40.0, 160.0};
  const BecSweepResult r = bec_sweep(g, preset_kirchhoff(g), etas, 1.0, 1.0);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    EXPECT_LT(*r.records[i].condensate_fraction, *r.records[i - 1].condensate_fraction);
  }
  EXPECT_LT(*r.records.back().condensate_fraction, 0.25 * *r.records.front().condensate_fraction);
}

TEST(BecSweep, AttractiveStarPersists) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  const std::vector<double> etas{10.0, 40.0};
  const BecSweepResult r = bec_sweep(g, star_centre(g, -3.0), etas, 0.125, 1.0, {}, {}, true);
  EXPECT_EQ(r.verdict, BecVerdict::Persistent);
  for (const auto& rec : r.records) {
    EXPECT_GE(*rec.condensate_fraction, 0.5);
    EXPECT_GE(*rec.lambda_po, 0.5);
    EXPECT_LT(*rec.mu, rec.ground_energy);
  }
}

TEST(BecSweep, ThreadCountDoesNotChangeResults) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  const std::vector<double> etas{5.0, 10.0, 20.0};
  SweepOptions one;
  SweepOptions four;
  four.threads = 4;
  const auto a = bec_sweep(g, preset_kirchhoff(g), etas, 1.0, 1.0, one, {}, false);
  const auto b = bec_sweep(g, preset_kirchhoff(g), etas, 1.0, 1.0, four, {}, false);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    EXPECT_EQ(*a.records[i].mu, *b.records[i].mu);
    EXPECT_EQ(*a.records[i].condensate_fraction, *b.records[i].condensate_fraction);
  }
}

TEST(CriticalTemperature, KirchhoffHasNone) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  std::vector<double> grid;
  for (int i = 1; i <= 12; ++i) grid.push_back(0.25 * i);
  const auto est = critical_temperature_estimate(g, preset_kirchhoff(g), 160.0, 1.0, grid);
  EXPECT_FALSE(est.estimate.has_value());
}

TEST(CriticalTemperature, AttractiveStarPositiveAndStable) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  const VertexConditions vc = star_centre(g, -3.0);
  std::vector<double> grid;
  for (int i = 1; i <= 24; ++i) grid.push_back(0.25 * i);
  const auto a = critical_temperature_estimate(g, vc, 80.0, 1.0, grid);
  const auto b = critical_temperature_estimate(g, vc, 160.0, 1.0, grid);
  ASSERT_TRUE(a.estimate && b.estimate);
  EXPECT_GT(*b.estimate, 0.0);
  EXPECT_LE(std::abs(*b.estimate - *a.estimate), 0.2 * *a.estimate);
  // grid entirely above the estimate
  const std::vector<double> hot{*b.estimate + 2.0, *b.estimate + 3.0};
  EXPECT_FALSE(critical_temperature_estimate(g, vc, 160.0, 1.0, hot).estimate.has_value());
}

TEST(TonksSweep, GapsShrink) {
  const MetricGraph g = graphs::interval(1.0);
  const std::vector<double> etas{25.0, 50.0, 100.0, 200.0};
  for (double mu : {0.0, -1.0}) {
    const auto records = tonks_convergence_sweep(g, etas, 1.0, mu);
    for (std::size_t i = 1; i < records.size(); ++i) {
      EXPECT_LT(*records[i].free_energy_gap, *records[i - 1].free_energy_gap);
    }
    EXPECT_LE(*records.back().free_energy_gap, 5e-3);
  }
}

TEST(TonksSweep, SuppressedRegime) {
  const MetricGraph g = graphs::interval(1.0);
  const std::vector<double> etas{25.0, 50.0};
  for (const auto& r : tonks_convergence_sweep(g, etas, 1.0, -40.0)) {
    EXPECT_LE(*r.free_energy_gap, 1e-8);
  }
}

TEST(TonksSweep, StarAndIntervalAgree) {
  const std::vector<double> star_eta{100.0};
  const std::vector<double> interval_eta{300.0};
  const auto s = tonks_convergence_sweep(graphs::equilateral_star(3, 1.0), star_eta, 1.0, 0.0);
  const auto i = tonks_convergence_sweep(graphs::interval(1.0), interval_eta, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(s[0].total_length, i[0].total_length);
  EXPECT_LE(std::abs(*s[0].free_energy - *i[0].free_energy), 1e-2);
}

TEST(TonksSweep, ConditionsBuilder) {
  const MetricGraph g = graphs::equilateral_star(3, 1.0);
  const std::vector<double> etas{50.0};
  const auto k = tonks_convergence_sweep(g, etas, 1.0, 0.0, {},
                                         [](const MetricGraph& s) { return preset_kirchhoff(s); });
  const auto d = tonks_convergence_sweep(g, etas, 1.0, 0.0);
  EXPECT_LE(std::abs(*k[0].free_energy - *d[0].free_energy), 1e-2);
}
