#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "graphbec/graph.hpp"
#include "graphbec/spectral.hpp"
#include "graphbec/vertex_conditions.hpp"

namespace graphbec {

/// One point of an eta-scaling sweep. Fields a sweep does not compute stay empty.
struct SweepRecord {
  double eta = 0.0;
  double total_length = 0.0;
  double ground_energy = 0.0;
  std::size_t negative_count = 0;
  std::optional<double> mu;
  std::optional<double> density;
  std::optional<double> condensate_fraction;
  std::optional<double> lambda_po;
  std::optional<double> free_energy;
  std::optional<double> ground_residual;    // |E_0 + L_max^2|
  std::optional<double> free_energy_limit;  // f at infinite volume
  std::optional<double> free_energy_gap;    // |f_L - f_inf|
};

/// Vertex conditions for a scaled graph. Presets depend only on the
/// combinatorics, so the same (P, L) is reused unless a builder is supplied.
using ConditionsBuilder = std::function<VertexConditions(const MetricGraph&)>;

struct SweepOptions {
  unsigned threads = 1;
  SpectralOptions spectral;
  /// Nonnegative levels are kept up to max(E_0, 0) + thermal_margin / beta.
  double thermal_margin = 40.0;
};

/// Artifact conventions for turning finite-eta fractions into a verdict.
struct BecThresholds {
  double vanishing = 0.02;
  double persistent = 0.5;
  double critical = 0.1;
  double monotone_slack = 1e-2;
};

enum class BecVerdict { Vanishing, Persistent, Indeterminate };
std::string_view to_string(BecVerdict verdict) noexcept;

struct BecSweepResult {
  std::vector<SweepRecord> records;
  BecVerdict verdict = BecVerdict::Indeterminate;
  BecThresholds thresholds;
  double temperature = 0.0;
  double density = 0.0;
};

/// Spectrum of `system` with the nonnegative branch cut at
/// max(ground, 0) + margin / beta, where ground is the lowest negative
/// eigenvalue or the decoupled-Dirichlet upper bound (pi / l_max)^2.
Spectrum thermal_spectrum(const SecularSystem& system, double beta, double margin = 40.0,
                          double mu_floor = 0.0, const SpectralOptions& options = {});

/// E_0(eta) with the residual |E_0 + L_max^2|. Requires increasing eta.
std::vector<SweepRecord> ground_state_sweep(const MetricGraph& g, const VertexConditions& vc,
                                            std::span<const double> etas,
                                            const SweepOptions& options = {});

/// Fixed (T, rho) sweep: per eta solve mu, record the condensate fraction
/// and (when `with_lambda`) the canonical Penrose-Onsager eigenvalue at
/// N = round(rho * total_length). Verdict: "vanishing" if the fractions
/// decrease strictly and end at or below thresholds.vanishing; "persistent"
/// if they end at or above thresholds.persistent and never drop by more
/// than thresholds.monotone_slack.
BecSweepResult bec_sweep(const MetricGraph& g, const VertexConditions& vc,
                         std::span<const double> etas, double temperature, double density,
                         const SweepOptions& options = {}, const BecThresholds& thresholds = {},
                         bool with_lambda = true);

BecVerdict classify_fractions(std::span<const double> fractions, const BecThresholds& thresholds);

struct CriticalTemperatureEstimate {
  double eta = 0.0;
  double density = 0.0;
  double threshold = 0.1;
  std::vector<double> temperatures;  // ascending
  std::vector<double> fractions;
  /// Largest grid temperature whose condensate fraction reaches the
  /// threshold; empty when none does (no condensation detected).
  std::optional<double> estimate;
};

/// Operational T_c at one eta. The spectrum is computed once, for the
/// highest temperature on the grid, and reused.
CriticalTemperatureEstimate critical_temperature_estimate(const MetricGraph& g,
                                                          const VertexConditions& vc, double eta,
                                                          double density,
                                                          std::span<const double> temperatures,
                                                          const SweepOptions& options = {},
                                                          double threshold = 0.1);

/// f_L(eta) of the hardcore gas (fermionised one-particle levels) against the
/// infinite-volume integral. Uses Dirichlet conditions unless `conditions`
/// is supplied.
std::vector<SweepRecord> tonks_convergence_sweep(const MetricGraph& g,
                                                 std::span<const double> etas, double beta,
                                                 double mu, const SweepOptions& options = {},
                                                 const ConditionsBuilder& conditions = {});

/// Default eta list {10, 20, 40, 80, 160}.
std::vector<double> default_etas();

/// Runs task(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

}  // namespace graphbec
