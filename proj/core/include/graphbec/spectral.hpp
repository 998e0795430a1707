#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "graphbec/graph.hpp"
#include "graphbec/vertex_conditions.hpp"

namespace graphbec {

enum class Branch { Negative, Nonnegative };

/// A point on one branch of the spectral axis: E = k^2 on the nonnegative
/// branch (value = k >= 0), E = -kappa^2 on the negative branch (value = kappa > 0).
struct SpectralPoint {
  Branch branch = Branch::Nonnegative;
  double value = 0.0;

  static SpectralPoint oscillatory(double k) { return {Branch::Nonnegative, k}; }
  static SpectralPoint decaying(double kappa) { return {Branch::Negative, kappa}; }
  double energy() const noexcept {
    return branch == Branch::Negative ? -value * value : value * value;
  }
};

struct Level {
  double energy = 0.0;
  std::size_t multiplicity = 1;
};

/// Laplacian eigenvalues split by sign, each branch sorted ascending.
struct Spectrum {
  std::vector<Level> negatives;
  std::vector<Level> nonnegatives;  // all eigenvalues in [0, cutoff]
  double total_length = 0.0;
  double cutoff = 0.0;  // E_max of the nonnegative branch

  /// Both branches merged, ascending.
  std::vector<Level> levels() const;
  std::size_t negative_count() const noexcept;
  std::size_t nonnegative_count() const noexcept;
  /// Lowest eigenvalue; nullopt if both branches are empty.
  std::optional<Level> ground() const;
};

struct SpectralOptions {
  /// Upper bound on the k-grid step, on top of pi / (4 max_e l_e).
  double max_step = 0.05;
  /// Refined roots are located to |dk| <= root_tolerance.
  double root_tolerance = 1e-12;
  /// Singular values below this times ||M|| count toward multiplicity.
  double multiplicity_threshold = 1e-8;
  /// Verify every grid cell against the exact eigenvalue count and
  /// re-resolve cells where the singular-value scan disagrees.
  bool verify_with_count = true;
};

/// Matrix-valued secular function of a (graph, conditions) pair.
///
/// On each edge the solution is expanded in a real basis: cos(kx) and
/// sin(kx)/min(k,1) on the oscillatory branch (continuous with the linear
/// ansatz a + b x at k = 0), and the bounded pair
/// sinh(kappa (l - x))/sinh(kappa l), sinh(kappa x)/sinh(kappa l) on the
/// decaying branch. M stacks P F_bv and (1 - P)(F'_bv + L F_bv) into one
/// 2E x 2E matrix; the derivative rows are rescaled, which leaves the kernel
/// unchanged. E is an eigenvalue iff M is singular, with multiplicity
/// dim ker M.
class SecularSystem {
 public:
  /// Throws Error{InvalidConditions}.
  SecularSystem(const MetricGraph& g, const VertexConditions& vc);

  ComplexMatrix matrix(SpectralPoint point) const;
  /// All singular values of M, descending.
  Eigen::VectorXd singular_values(SpectralPoint point) const;
  double smallest_singular_value(SpectralPoint point) const;

  /// Exact number of eigenvalues strictly below `energy`, with multiplicity.
  /// Uses N(E) = N_Dirichlet(E) + n_+(Q^*(Lambda(E) + L)Q), with Lambda the
  /// edgewise Dirichlet-to-Neumann map (inward derivatives) and Q a basis of
  /// ker P. Returns nullopt when `energy` sits on a Dirichlet eigenvalue or
  /// an eigenvalue of the operator itself, where the index is ambiguous.
  std::optional<std::size_t> count_below(double energy) const;

  /// Number of negative eigenvalues, read off at E = 0 where zero
  /// eigenvalues of Q^*(Lambda(0) + L)Q are the E = 0 modes and are skipped.
  std::size_t negative_eigenvalue_count() const;

  const LSpectrumSummary& coupling_spectrum() const noexcept { return l_summary_; }
  double total_length() const noexcept { return total_length_; }
  double max_edge_length() const noexcept { return max_length_; }
  double min_edge_length() const noexcept { return min_length_; }
  std::size_t edge_count() const noexcept { return lengths_.size(); }
  std::size_t vertex_count() const noexcept { return vertex_count_; }

 private:
  ComplexMatrix oscillatory_matrix(double k) const;
  ComplexMatrix decaying_matrix(double kappa) const;
  ComplexMatrix dirichlet_to_neumann(double energy) const;

  std::vector<double> lengths_;
  std::size_t vertex_count_;
  double total_length_;
  double max_length_;
  double min_length_;
  ComplexMatrix projector_;
  ComplexMatrix complement_;  // 1 - P
  ComplexMatrix coupling_;
  ComplexMatrix kernel_basis_;  // orthonormal columns spanning ker P
  LSpectrumSummary l_summary_;
};

/// Smallest singular value of the secular matrix; zero iff `point` is an eigenvalue.
double secular_value(const MetricGraph& g, const VertexConditions& vc, SpectralPoint point);

/// Eigenvalues in [0, e_max] with multiplicity. Throws CutoffTooSmall when
/// e_max <= 0 or when nothing is found where the Weyl count predicts levels.
Spectrum positive_spectrum(const MetricGraph& g, const VertexConditions& vc, double e_max,
                           const SpectralOptions& options = {});
Spectrum positive_spectrum(const SecularSystem& system, double e_max,
                           const SpectralOptions& options = {});

/// All negative eigenvalues. Throws BoundViolation if more are found than
/// L has positive eigenvalues.
Spectrum negative_spectrum(const MetricGraph& g, const VertexConditions& vc,
                           const SpectralOptions& options = {});
Spectrum negative_spectrum(const SecularSystem& system, const SpectralOptions& options = {});

/// Both branches; the nonnegative one up to e_max.
Spectrum full_spectrum(const SecularSystem& system, double e_max,
                       const SpectralOptions& options = {});
Spectrum full_spectrum(const MetricGraph& g, const VertexConditions& vc, double e_max,
                       const SpectralOptions& options = {});

/// Minimum over both branches.
double ground_state_energy(const MetricGraph& g, const VertexConditions& vc, double e_max,
                           const SpectralOptions& options = {});

/// Upper bound on kappa for any bound state, max of 2 max(L_max, 1) and a
/// trace-inequality bound that also covers short edges.
double decaying_scan_limit(const SecularSystem& system);

/// sup over k in [0, sqrt(cutoff)] of |N(k) - total_length k / pi|, where
/// N(k) counts all eigenvalues <= k^2 with multiplicity (negatives included).
double weyl_deviation(const Spectrum& spectrum);

}  // namespace graphbec
