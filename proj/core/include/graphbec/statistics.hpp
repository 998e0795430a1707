#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphbec/spectral.hpp"

namespace graphbec {

/// Grand-canonical state of the ideal Bose gas on a finite graph.
struct GasObservables {
  double beta = 0.0;
  double mu = 0.0;
  double density = 0.0;              // particles per unit length
  double condensate_fraction = 0.0;  // ground-level occupation / (density * total_length)
  double total_length = 0.0;
};

/// Relative size of the Weyl tail correction above which the cutoff is rejected.
inline constexpr double kMaxRelativeTail = 1e-8;

/// rho = (1/total_length) sum_n m_n / (exp(beta (E_n - mu)) - 1), plus the
/// contribution of levels above the cutoff estimated with the Weyl density
/// total_length / (2 pi sqrt(E)). Throws ChemicalPotentialAboveGroundState
/// when mu >= E_0 and InsufficientCutoff when the tail exceeds kMaxRelativeTail.
double bose_density(const Spectrum& spectrum, double beta, double mu);

/// Same density parametrised by the gap E_0 - mu > 0, which keeps full
/// precision for a chemical potential pinned just below the ground state.
double bose_density_at_gap(const Spectrum& spectrum, double beta, double gap);

/// Chemical potential mu < E_0 with |rho(mu) - target| / target <= 1e-10.
/// Bisects on log(E_0 - mu) after a geometric bracket search. Throws NoConvergence.
double solve_chemical_potential(const Spectrum& spectrum, double beta, double density);

/// Occupation of the (possibly degenerate) ground level over density * total_length.
double condensate_fraction(const Spectrum& spectrum, double beta, double mu, double density);

/// Solves for mu at the given density and fills in the remaining observables.
GasObservables grand_canonical_state(const Spectrum& spectrum, double beta, double density);

/// Canonical partition functions of N non-interacting bosons,
/// Z_N = (1/N) sum_{k=1..N} Z_1(k beta) Z_{N-k}(beta).
///
/// Energies are shifted by the ground energy and the recursion runs on the
/// ratios Z_N / Z_{N-1}, so neither large N nor negative ground states
/// overflow. Occupations are per one-particle state (not per level).
class CanonicalTable {
 public:
  CanonicalTable(std::span<const Level> levels, std::size_t n_max, double beta);

  std::size_t n_max() const noexcept { return ratios_.size(); }
  double beta() const noexcept { return beta_; }

  /// log Z_N including the ground-energy shift.
  double log_partition(std::size_t n) const;
  /// Z_N; may overflow to inf for large N, use log_partition then.
  double partition(std::size_t n) const;

  /// <n_j> at fixed N for each level j (per state, so a level of
  /// multiplicity m holds m * <n_j> particles in total).
  std::vector<double> occupations(std::size_t n) const;

 private:
  std::vector<double> shifted_;  // E_j - E_0
  std::vector<std::size_t> multiplicity_;
  double ground_ = 0.0;
  double beta_ = 0.0;
  std::vector<double> ratios_;  // ratios_[N-1] = Z'_N / Z'_{N-1}
};

CanonicalTable canonical_partitions(std::span<const Level> levels, std::size_t n_max,
                                    double beta);

/// Largest eigenvalue of the reduced one-particle density matrix over N.
/// For a non-interacting gas the natural orbitals are the one-particle
/// eigenstates, so this is max_j <n_j> / N.
double penrose_onsager_lambda(std::span<const Level> levels, std::size_t n, double beta);

/// Convenience: expand plain energies into unit-multiplicity levels.
std::vector<Level> as_levels(std::span<const double> energies);

}  // namespace graphbec
