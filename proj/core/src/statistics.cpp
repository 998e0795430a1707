#include "graphbec/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "graphbec/errors.hpp"

namespace graphbec {

namespace {

using std::numbers::pi;

// exp(a) * erfc(x) without intermediate overflow or underflow.
double exp_times_erfc(double a, double x) {
  if (x < 20.0) return std::exp(a) * std::erfc(x);
  const double inv2 = 1.0 / (x * x);
  return std::exp(a - x * x) / (x * std::sqrt(pi)) * (1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2);
}

// Per-unit-length particle number above `cutoff` for the Weyl density
// 1 / (2 pi sqrt(E)):  sum_j e^{j beta mu} sqrt(pi/(j beta)) erfc(sqrt(j beta cutoff)) / (2 pi).
double bose_tail(double beta, double mu, double cutoff) {
  double sum = 0.0;
  for (int j = 1; j <= 10000; ++j) {
    const double jb = j * beta;
    const double term =
        std::sqrt(pi / jb) * exp_times_erfc(jb * mu, std::sqrt(jb * cutoff)) / (2.0 * pi);
    sum += term;
    if (term <= 1e-18 * sum || term == 0.0) break;
  }
  return sum;
}

const Level& ground_level(const Spectrum& spectrum) {
  if (spectrum.negatives.empty() && spectrum.nonnegatives.empty()) {
    throw Error(ErrorCode::TooFewLevels, "spectrum is empty");
  }
  return spectrum.negatives.empty() ? spectrum.nonnegatives.front() : spectrum.negatives.front();
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double bose_density_at_gap(const Spectrum& spectrum, double beta, double gap) {
  require_positive(beta, "beta");
  if (!(gap > 0.0)) {
    throw Error(ErrorCode::ChemicalPotentialAboveGroundState,
                "chemical potential must lie strictly below the ground-state energy");
  }
  const double e0 = ground_level(spectrum).energy;
  double particles = 0.0;
  auto accumulate = [&](const std::vector<Level>& levels) {
    for (const Level& level : levels) {
      const double x = beta * ((level.energy - e0) + gap);
      particles += static_cast<double>(level.multiplicity) / std::expm1(x);
    }
  };
  accumulate(spectrum.negatives);
  accumulate(spectrum.nonnegatives);

  const double mu = e0 - gap;
  const double density = particles / spectrum.total_length;
  const double tail = spectrum.cutoff > 0.0 ? bose_tail(beta, mu, spectrum.cutoff) : 0.0;
  if (!(tail <= kMaxRelativeTail * density)) {
    throw Error(ErrorCode::InsufficientCutoff,
                "levels above E_max carry more than 1e-8 of the density; raise E_max");
  }
  return density + tail;
}

double bose_density(const Spectrum& spectrum, double beta, double mu) {
  const double e0 = ground_level(spectrum).energy;
  if (!(mu < e0)) {
    throw Error(ErrorCode::ChemicalPotentialAboveGroundState,
                "chemical potential must lie strictly below the ground-state energy");
  }
  return bose_density_at_gap(spectrum, beta, e0 - mu);
}

double solve_chemical_potential(const Spectrum& spectrum, double beta, double density) {
  require_positive(beta, "beta");
  require_positive(density, "density");
  const double e0 = ground_level(spectrum).energy;
  auto rho = [&](double gap) { return bose_density_at_gap(spectrum, beta, gap); };

  // rho is decreasing in the gap E_0 - mu; bracket geometrically.
  double hi = 1.0 / beta;
  for (int i = 0; rho(hi) > density; ++i) {
    if (i > 200) throw Error(ErrorCode::NoConvergence, "cannot bracket mu from below");
    hi *= 4.0;
  }
  double lo = hi;
  for (int i = 0; rho(lo) < density; ++i) {
    if (i > 600 || lo < 1e-300) throw Error(ErrorCode::NoConvergence, "cannot bracket mu from above");
    lo /= 4.0;
  }

  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    const double value = rho(mid);
    if (std::abs(value - density) <= 1e-10 * density) return e0 - mid;
    if (value > density) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi / lo - 1.0 < 4.0 * std::numeric_limits<double>::epsilon()) break;
  }
  const double gap = std::sqrt(lo) * std::sqrt(hi);
  if (std::abs(rho(gap) - density) <= 1e-10 * density) return e0 - gap;
  throw Error(ErrorCode::NoConvergence, "chemical potential bisection did not reach 1e-10");
}

double condensate_fraction(const Spectrum& spectrum, double beta, double mu, double density) {
  require_positive(beta, "beta");
  require_positive(density, "density");
  const Level& ground = ground_level(spectrum);
  if (!(mu < ground.energy)) {
    throw Error(ErrorCode::ChemicalPotentialAboveGroundState,
                "chemical potential must lie strictly below the ground-state energy");
  }
  const double n0 =
      static_cast<double>(ground.multiplicity) / std::expm1(beta * (ground.energy - mu));
  return n0 / (density * spectrum.total_length);
}

GasObservables grand_canonical_state(const Spectrum& spectrum, double beta, double density) {
  GasObservables obs;
  obs.beta = beta;
  obs.density = density;
  obs.total_length = spectrum.total_length;
  obs.mu = solve_chemical_potential(spectrum, beta, density);
  obs.condensate_fraction = condensate_fraction(spectrum, beta, obs.mu, density);
  return obs;
}

CanonicalTable::CanonicalTable(std::span<const Level> levels, std::size_t n_max, double beta)
    : beta_(beta) {
  require_positive(beta, "beta");
  if (levels.empty()) throw Error(ErrorCode::TooFewLevels, "canonical table needs levels");
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "N_max must be at least 1");

  ground_ = std::min_element(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
              return a.energy < b.energy;
            })->energy;
  for (const Level& l : levels) {
    shifted_.push_back(l.energy - ground_);
    multiplicity_.push_back(l.multiplicity);
  }

  // single-particle partition function at k * beta, k = 1..n_max
  std::vector<double> z1(n_max + 1, 0.0);
  for (std::size_t k = 1; k <= n_max; ++k) {
    double z = 0.0;
    for (std::size_t j = 0; j < shifted_.size(); ++j) {
      z += static_cast<double>(multiplicity_[j]) *
           std::exp(-static_cast<double>(k) * beta_ * shifted_[j]);
    }
    z1[k] = z;
  }

  ratios_.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    // Z'_{n-k} / Z'_{n-1} = 1 / (r_{n-1} ... r_{n-k+1})
    double inverse_product = 1.0;
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (k > 1) inverse_product /= ratios_[n - k];
      sum += z1[k] * inverse_product;
    }
    const double r = sum / static_cast<double>(n);
    if (!std::isfinite(r) || !(r > 0.0)) {
      throw Error(ErrorCode::Overflow, "canonical recursion left the floating-point range");
    }
    ratios_.push_back(r);
  }
}

double CanonicalTable::log_partition(std::size_t n) const {
  if (n > ratios_.size()) throw Error(ErrorCode::InvalidArgument, "N exceeds N_max");
  double log_z = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_z += std::log(ratios_[i]);
  return log_z - static_cast<double>(n) * beta_ * ground_;
}

double CanonicalTable::partition(std::size_t n) const { return std::exp(log_partition(n)); }

std::vector<double> CanonicalTable::occupations(std::size_t n) const {
  if (n > ratios_.size()) throw Error(ErrorCode::InvalidArgument, "N exceeds N_max");
  std::vector<double> occ(shifted_.size(), 0.0);
  if (n == 0) return occ;
  // Z'_{n-k} / Z'_n = 1 / (r_n r_{n-1} ... r_{n-k+1})
  std::vector<double> weight(n + 1, 0.0);
  double inverse_product = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    inverse_product /= ratios_[n - k];
    weight[k] = inverse_product;
  }
  for (std::size_t j = 0; j < shifted_.size(); ++j) {
    const double boltzmann = std::exp(-beta_ * shifted_[j]);
    double power = 1.0;
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      power *= boltzmann;
      if (power == 0.0) break;
      sum += power * weight[k];
    }
    occ[j] = sum;
  }
  return occ;
}

CanonicalTable canonical_partitions(std::span<const Level> levels, std::size_t n_max,
                                    double beta) {
  return CanonicalTable(levels, n_max, beta);
}

double penrose_onsager_lambda(std::span<const Level> levels, std::size_t n, double beta) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "N must be at least 1");
  const CanonicalTable table(levels, n, beta);
  const auto occ = table.occupations(n);
  return *std::max_element(occ.begin(), occ.end()) / static_cast<double>(n);
}

std::vector<Level> as_levels(std::span<const double> energies) {
  std::vector<Level> levels;
  levels.reserve(energies.size());
  for (double e : energies) levels.push_back({e, 1});
  return levels;
}

}  // namespace graphbec
