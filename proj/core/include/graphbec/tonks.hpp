#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "graphbec/spectral.hpp"

namespace graphbec {

/// Infinite-volume free-energy density of the hardcore Bose gas,
///   f(beta, mu) = -(1 / (pi beta)) int_0^inf log(1 + exp(-beta (k^2 - mu))) dk.
/// Adaptive Gauss-Kronrod on [0, k_cut], k_cut = sqrt(max(mu, 0) + 40 / beta),
/// with the Gaussian tail bound checked below 1e-12. Absolute error <= 1e-10.
/// Throws QuadratureFailure.
double limit_free_energy_density(double beta, double mu);

/// Finite-volume density -(1 / (beta total_length)) sum_n log(1 + exp(-beta (E_n - mu)))
/// over the one-particle levels, with the levels above the cutoff added through
/// the Weyl density. Throws InsufficientCutoff if exp(-beta (E_max - mu)) >= 1e-14.
double finite_free_energy_density(const Spectrum& spectrum, double beta, double mu);

/// N-particle energies of the hardcore gas in the mapped (Dirichlet on
/// coincidence planes) case: every sum of N distinct one-particle levels.
struct HardcoreSpectrum {
  std::size_t particles = 0;
  std::vector<double> energies;  // ascending
};

/// Upper limit on the number of N-subsets enumerated.
inline constexpr std::size_t kMaxHardcoreConfigurations = std::size_t{1} << 22;

/// `levels` lists one-particle states (repeat a degenerate level). Throws
/// TooFewLevels when fewer than N states are given and InvalidArgument when
/// the subset count exceeds kMaxHardcoreConfigurations.
HardcoreSpectrum hardcore_levels(std::span<const double> levels, std::size_t particles);

/// Relative discrepancy between prod_n (1 + e^{-beta (E_n - mu)}) and
/// sum_{N=0..N_max} e^{N beta mu} Z_N^F, with Z_N^F summed over
/// hardcore_levels(levels, N). N_max defaults to the number of levels.
double grand_canonical_consistency(std::span<const double> levels, double beta, double mu,
                                   std::optional<std::size_t> n_max = std::nullopt);

/// f(beta, mu) on a uniform mu grid with fourth-order central differences.
struct FreeEnergyCurve {
  double beta = 0.0;
  double step = 0.0;
  std::vector<double> mu;
  std::vector<double> f;
  std::vector<double> df_dmu;
  std::vector<double> d2f_dmu2;

  /// max over adjacent grid points of |d2f[i+1] - d2f[i]|.
  double jump_statistic() const;
};

/// Derivatives use the five-point stencils with spacing `step` around each
/// grid point, so values just outside [mu_lo, mu_hi] are also evaluated.
FreeEnergyCurve free_energy_curve(double beta, double mu_lo, double mu_hi, double step);

/// One curve per beta over a uniform mu grid (at least 9 points).
std::vector<FreeEnergyCurve> smoothness_scan(std::span<const double> betas,
                                             std::span<const double> mu_grid);

/// max |d2f_coarse(mu) - d2f_fine(mu)| over the mu values both grids share.
double second_derivative_refinement_gap(const FreeEnergyCurve& coarse,
                                        const FreeEnergyCurve& fine);

}  // namespace graphbec
