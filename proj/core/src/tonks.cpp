#include "graphbec/tonks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "graphbec/errors.hpp"

namespace graphbec {

namespace {

using std::numbers::pi;

// log(1 + e^{-y}) for any real y.
double log1p_exp_neg(double y) {
  return y > 0.0 ? std::log1p(std::exp(-y)) : -y + std::log1p(std::exp(y));
}

double exp_times_erfc(double a, double x) {
  if (x < 20.0) return std::exp(a) * std::erfc(x);
  const double inv2 = 1.0 / (x * x);
  return std::exp(a - x * x) / (x * std::sqrt(pi)) * (1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2);
}

// Per-unit-length sum of log(1 + z e^{-beta E}) above `cutoff` with Weyl density
// 1 / (2 pi sqrt(E)), expanded in powers of z = e^{beta mu}.
double fermi_tail(double beta, double mu, double cutoff) {
  double sum = 0.0;
  for (int j = 1; j <= 10000; ++j) {
    const double jb = j * beta;
    const double term = std::sqrt(pi / jb) * exp_times_erfc(jb * mu, std::sqrt(jb * cutoff)) /
                        (2.0 * pi * j);
    sum += (j % 2 == 1) ? term : -term;
    if (term <= 1e-18 * std::abs(sum) || term == 0.0) break;
  }
  return sum;
}

// Adaptive Gauss-Kronrod with an absolute error target: a panel is accepted
// once its error estimate is below its share of `tol`.
struct PanelBudget {
  int remaining = 20000;
};

template <class F>
double integrate_absolute(const F& f, double a, double b, double tol, double& error,
                          PanelBudget& budget) {
  if (--budget.remaining < 0) {
    throw Error(ErrorCode::QuadratureFailure, "free-energy quadrature exceeded its panel budget");
  }
  double panel_error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &panel_error);
  if (panel_error <= tol) {
    error += panel_error;
    return value;
  }
  const double mid = 0.5 * (a + b);
  return integrate_absolute(f, a, mid, 0.5 * tol, error, budget) +
         integrate_absolute(f, mid, b, 0.5 * tol, error, budget);
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive and finite");
  }
}

}  // namespace

double limit_free_energy_density(double beta, double mu) {
  require_beta(beta);
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite");

  double margin = 40.0;
  double k_cut = 0.0;
  for (int attempt = 0;; ++attempt) {
    k_cut = std::sqrt(std::max(mu, 0.0) + margin / beta);
    // int_{k_cut}^inf log(1 + e^{-beta(k^2 - mu)}) dk <= e^{beta(mu - k_cut^2)} / (2 beta k_cut)
    const double tail_bound = std::exp(beta * (mu - k_cut * k_cut)) / (2.0 * beta * k_cut);
    if (tail_bound < 1e-12 * pi * beta) break;
    if (attempt > 20) throw Error(ErrorCode::QuadratureFailure, "tail bound not reached");
    margin *= 2.0;
  }

  auto integrand = [&](double k) { return log1p_exp_neg(beta * (k * k - mu)); };
  double error = 0.0;
  // Split at the Fermi point so each panel is smooth on its scale.
  std::vector<double> breaks{0.0};
  if (mu > 0.0 && std::sqrt(mu) < k_cut) breaks.push_back(std::sqrt(mu));
  breaks.push_back(k_cut);
  // f carries a 1 / (pi beta) factor; target 1e-12 absolute on f
  const double tol = 1e-12 * pi * beta;
  double integral = 0.0;
  PanelBudget budget;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    integral += integrate_absolute(integrand, breaks[i], breaks[i + 1],
                                   tol / static_cast<double>(breaks.size() - 1), error, budget);
  }
  const double f = -integral / (pi * beta);
  if (!(error / (pi * beta) <= 1e-10)) {
    throw Error(ErrorCode::QuadratureFailure,
                "free-energy quadrature error estimate above 1e-10 (" + std::to_string(error) + ")");
  }
  return f;
}

double finite_free_energy_density(const Spectrum& spectrum, double beta, double mu) {
  require_beta(beta);
  if (spectrum.cutoff > 0.0 && !(std::exp(-beta * (spectrum.cutoff - mu)) < 1e-14)) {
    throw Error(ErrorCode::InsufficientCutoff,
                "exp(-beta (E_max - mu)) must be below 1e-14; raise E_max");
  }
  double sum = 0.0;
  for (const Level& level : spectrum.levels()) {
    sum += static_cast<double>(level.multiplicity) * log1p_exp_neg(beta * (level.energy - mu));
  }
  double per_length = sum / spectrum.total_length;
  if (spectrum.cutoff > 0.0) per_length += fermi_tail(beta, mu, spectrum.cutoff);
  return -per_length / beta;
}

HardcoreSpectrum hardcore_levels(std::span<const double> levels, std::size_t particles) {
  if (levels.size() < particles) {
    throw Error(ErrorCode::TooFewLevels,
                "need at least " + std::to_string(particles) + " one-particle states, got " +
                    std::to_string(levels.size()));
  }
  // binomial(levels, particles) with an early exit once above the limit
  double configurations = 1.0;
  for (std::size_t i = 0; i < particles; ++i) {
    configurations *= static_cast<double>(levels.size() - i) / static_cast<double>(i + 1);
  }
  if (configurations > static_cast<double>(kMaxHardcoreConfigurations)) {
    throw Error(ErrorCode::InvalidArgument, "too many hardcore configurations to enumerate");
  }

  HardcoreSpectrum out;
  out.particles = particles;
  std::vector<std::size_t> idx(particles);
  for (std::size_t i = 0; i < particles; ++i) idx[i] = i;
  const std::size_t n = levels.size();
  while (true) {
    double e = 0.0;
    for (std::size_t i : idx) e += levels[i];
    out.energies.push_back(e);
    // next combination in lexicographic order
    std::size_t pos = particles;
    while (pos > 0 && idx[pos - 1] == n - particles + (pos - 1)) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < particles; ++i) idx[i] = idx[i - 1] + 1;
  }
  std::sort(out.energies.begin(), out.energies.end());
  return out;
}

double grand_canonical_consistency(std::span<const double> levels, double beta, double mu,
                                   std::optional<std::size_t> n_max) {
  require_beta(beta);
  const std::size_t top = std::min(n_max.value_or(levels.size()), levels.size());
  double product = 1.0;
  for (double e : levels) product *= 1.0 + std::exp(-beta * (e - mu));

  double sum = 0.0;
  for (std::size_t n = 0; n <= top; ++n) {
    const HardcoreSpectrum hc = hardcore_levels(levels, n);
    // e^{N beta mu} Z_N^F folded into one exponent per configuration
    for (double e : hc.energies) sum += std::exp(-beta * (e - static_cast<double>(n) * mu));
  }
  return std::abs(product - sum) / product;
}

double FreeEnergyCurve::jump_statistic() const {
  double jump = 0.0;
  for (std::size_t i = 0; i + 1 < d2f_dmu2.size(); ++i) {
    jump = std::max(jump, std::abs(d2f_dmu2[i + 1] - d2f_dmu2[i]));
  }
  return jump;
}

FreeEnergyCurve free_energy_curve(double beta, double mu_lo, double mu_hi, double step) {
  require_beta(beta);
  if (!(step > 0.0) || !(mu_hi > mu_lo)) {
    throw Error(ErrorCode::InvalidArgument, "free-energy grid needs step > 0 and mu_hi > mu_lo");
  }
  const auto n = static_cast<std::size_t>(std::llround((mu_hi - mu_lo) / step));
  FreeEnergyCurve curve;
  curve.beta = beta;
  curve.step = step;

  // f at mu_lo + (i - 2) step for i = 0 .. n + 4
  std::vector<double> values(n + 5);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = limit_free_energy_density(
        beta, mu_lo + (static_cast<double>(i) - 2.0) * step);
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const double m2 = values[i];
    const double m1 = values[i + 1];
    const double c = values[i + 2];
    const double p1 = values[i + 3];
    const double p2 = values[i + 4];
    curve.mu.push_back(mu_lo + static_cast<double>(i) * step);
    curve.f.push_back(c);
    curve.df_dmu.push_back((-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * step));
    curve.d2f_dmu2.push_back((-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) /
                             (12.0 * step * step));
  }
  return curve;
}

std::vector<FreeEnergyCurve> smoothness_scan(std::span<const double> betas,
                                             std::span<const double> mu_grid) {
  if (mu_grid.size() < 9) {
    throw Error(ErrorCode::InvalidArgument, "smoothness scan needs at least 9 mu points");
  }
  const double step = (mu_grid.back() - mu_grid.front()) / static_cast<double>(mu_grid.size() - 1);
  for (std::size_t i = 1; i < mu_grid.size(); ++i) {
    if (std::abs(mu_grid[i] - mu_grid[i - 1] - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw Error(ErrorCode::InvalidArgument, "smoothness scan needs a uniform mu grid");
    }
  }
  std::vector<FreeEnergyCurve> curves;
  for (double beta : betas) {
    curves.push_back(free_energy_curve(beta, mu_grid.front(), mu_grid.back(), step));
  }
  return curves;
}

double second_derivative_refinement_gap(const FreeEnergyCurve& coarse,
                                        const FreeEnergyCurve& fine) {
  double gap = 0.0;
  const double tol = 1e-9 * std::min(coarse.step, fine.step);
  for (std::size_t i = 0; i < coarse.mu.size(); ++i) {
    for (std::size_t j = 0; j < fine.mu.size(); ++j) {
      if (std::abs(coarse.mu[i] - fine.mu[j]) <= tol) {
        gap = std::max(gap, std::abs(coarse.d2f_dmu2[i] - fine.d2f_dmu2[j]));
        break;
      }
    }
  }
  return gap;
}

}  // namespace graphbec
