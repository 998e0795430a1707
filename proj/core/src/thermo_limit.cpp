#include "graphbec/thermo_limit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "graphbec/errors.hpp"
#include "graphbec/statistics.hpp"
#include "graphbec/tonks.hpp"

namespace graphbec {

namespace {

void require_increasing(std::span<const double> etas) {
  if (etas.empty()) throw Error(ErrorCode::InvalidArgument, "eta list is empty");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] > 0.0)) throw Error(ErrorCode::NonPositiveScale, "eta must be positive");
    if (i > 0 && !(etas[i] > etas[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "eta list must be strictly increasing");
    }
  }
}

VertexConditions conditions_for(const MetricGraph& scaled, const VertexConditions& base,
                                const ConditionsBuilder& builder) {
  return builder ? builder(scaled) : base;
}

}  // namespace

std::string_view to_string(BecVerdict verdict) noexcept {
  switch (verdict) {
    case BecVerdict::Vanishing: return "vanishing";
    case BecVerdict::Persistent: return "persistent";
    case BecVerdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> default_etas() { return {10.0, 20.0, 40.0, 80.0, 160.0}; }

Spectrum thermal_spectrum(const SecularSystem& system, double beta, double margin,
                          double mu_floor, const SpectralOptions& options) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  Spectrum negatives = negative_spectrum(system, options);
  const double pi_over_l = std::numbers::pi / system.max_edge_length();
  const double ground_bound =
      negatives.negatives.empty() ? pi_over_l * pi_over_l : negatives.negatives.front().energy;
  const double e_max = std::max({ground_bound, 0.0, mu_floor}) + margin / beta;
  Spectrum spectrum = positive_spectrum(system, e_max, options);
  spectrum.negatives = std::move(negatives.negatives);
  return spectrum;
}

std::vector<SweepRecord> ground_state_sweep(const MetricGraph& g, const VertexConditions& vc,
                                            std::span<const double> etas,
                                            const SweepOptions& options) {
  require_increasing(etas);
  const double l_max = l_spectrum(vc).l_max;
  std::vector<SweepRecord> records(etas.size());
  parallel_for(etas.size(), options.threads, [&](std::size_t i) {
    const MetricGraph scaled = g.scaled(etas[i]);
    const SecularSystem system(scaled, vc);
    SweepRecord& r = records[i];
    r.eta = etas[i];
    r.total_length = scaled.total_length();
    const Spectrum negatives = negative_spectrum(system, options.spectral);
    r.negative_count = negatives.negative_count();
    if (!negatives.negatives.empty()) {
      r.ground_energy = negatives.negatives.front().energy;
    } else {
      // the lowest nonnegative level sits below the decoupled Dirichlet bound
      const double bound = std::pow(std::numbers::pi / scaled.max_edge_length(), 2) * 1.01 + 1e-12;
      const Spectrum positives = positive_spectrum(system, bound, options.spectral);
      r.ground_energy = positives.nonnegatives.front().energy;
    }
    r.ground_residual = std::abs(r.ground_energy + l_max * std::abs(l_max));
  });
  return records;
}

BecVerdict classify_fractions(std::span<const double> fractions, const BecThresholds& thresholds) {
  if (fractions.empty()) return BecVerdict::Indeterminate;
  bool strictly_decreasing = true;
  bool nearly_nondecreasing = true;
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    if (!(fractions[i] < fractions[i - 1])) strictly_decreasing = false;
    if (fractions[i] < fractions[i - 1] - thresholds.monotone_slack) nearly_nondecreasing = false;
  }
  const double last = fractions.back();
  if (strictly_decreasing && last <= thresholds.vanishing) return BecVerdict::Vanishing;
  if (nearly_nondecreasing && last >= thresholds.persistent) return BecVerdict::Persistent;
  return BecVerdict::Indeterminate;
}

BecSweepResult bec_sweep(const MetricGraph& g, const VertexConditions& vc,
                         std::span<const double> etas, double temperature, double density,
                         const SweepOptions& options, const BecThresholds& thresholds,
                         bool with_lambda) {
  require_increasing(etas);
  if (!(temperature > 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be positive");
  if (!(density > 0.0)) throw Error(ErrorCode::InvalidArgument, "density must be positive");
  const double beta = 1.0 / temperature;

  BecSweepResult result;
  result.thresholds = thresholds;
  result.temperature = temperature;
  result.density = density;
  result.records.resize(etas.size());
  parallel_for(etas.size(), options.threads, [&](std::size_t i) {
    const MetricGraph scaled = g.scaled(etas[i]);
    const SecularSystem system(scaled, vc);
    const Spectrum spectrum = thermal_spectrum(system, beta, options.thermal_margin, 0.0,
                                               options.spectral);
    const GasObservables gas = grand_canonical_state(spectrum, beta, density);
    SweepRecord& r = result.records[i];
    r.eta = etas[i];
    r.total_length = spectrum.total_length;
    r.ground_energy = spectrum.ground()->energy;
    r.negative_count = spectrum.negative_count();
    r.mu = gas.mu;
    r.density = density;
    r.condensate_fraction = gas.condensate_fraction;
    if (with_lambda) {
      const auto particles =
          static_cast<std::size_t>(std::max(1.0, std::round(density * spectrum.total_length)));
      const auto levels = spectrum.levels();
      r.lambda_po = penrose_onsager_lambda(levels, particles, beta);
    }
  });

  std::vector<double> fractions;
  for (const SweepRecord& r : result.records) fractions.push_back(*r.condensate_fraction);
  result.verdict = classify_fractions(fractions, thresholds);
  return result;
}

CriticalTemperatureEstimate critical_temperature_estimate(const MetricGraph& g,
                                                          const VertexConditions& vc, double eta,
                                                          double density,
                                                          std::span<const double> temperatures,
                                                          const SweepOptions& options,
                                                          double threshold) {
  if (temperatures.empty()) throw Error(ErrorCode::InvalidArgument, "temperature grid is empty");
  if (!(density > 0.0)) throw Error(ErrorCode::InvalidArgument, "density must be positive");
  CriticalTemperatureEstimate est;
  est.eta = eta;
  est.density = density;
  est.threshold = threshold;
  est.temperatures.assign(temperatures.begin(), temperatures.end());
  std::sort(est.temperatures.begin(), est.temperatures.end());
  if (!(est.temperatures.front() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "temperatures must be positive");
  }

  const MetricGraph scaled = g.scaled(eta);
  const SecularSystem system(scaled, vc);
  const double beta_min = 1.0 / est.temperatures.back();
  const Spectrum spectrum =
      thermal_spectrum(system, beta_min, options.thermal_margin, 0.0, options.spectral);

  est.fractions.resize(est.temperatures.size());
  parallel_for(est.temperatures.size(), options.threads, [&](std::size_t i) {
    const GasObservables gas = grand_canonical_state(spectrum, 1.0 / est.temperatures[i], density);
    est.fractions[i] = gas.condensate_fraction;
  });
  for (std::size_t i = est.temperatures.size(); i-- > 0;) {
    if (est.fractions[i] >= threshold) {
      est.estimate = est.temperatures[i];
      break;
    }
  }
  return est;
}

std::vector<SweepRecord> tonks_convergence_sweep(const MetricGraph& g,
                                                 std::span<const double> etas, double beta,
                                                 double mu, const SweepOptions& options,
                                                 const ConditionsBuilder& conditions) {
  require_increasing(etas);
  const double limit = limit_free_energy_density(beta, mu);
  const ConditionsBuilder builder =
      conditions ? conditions : ConditionsBuilder([](const MetricGraph& s) { return preset_dirichlet(s); });
  std::vector<SweepRecord> records(etas.size());
  parallel_for(etas.size(), options.threads, [&](std::size_t i) {
    const MetricGraph scaled = g.scaled(etas[i]);
    const SecularSystem system(scaled, conditions_for(scaled, VertexConditions{}, builder));
    const Spectrum spectrum =
        thermal_spectrum(system, beta, options.thermal_margin, mu, options.spectral);
    SweepRecord& r = records[i];
    r.eta = etas[i];
    r.total_length = spectrum.total_length;
    r.ground_energy = spectrum.ground() ? spectrum.ground()->energy : 0.0;
    r.negative_count = spectrum.negative_count();
    r.mu = mu;
    r.free_energy = finite_free_energy_density(spectrum, beta, mu);
    r.free_energy_limit = limit;
    r.free_energy_gap = std::abs(*r.free_energy - limit);
  });
  return records;
}

}  // namespace graphbec
