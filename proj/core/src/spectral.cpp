#include "graphbec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "graphbec/errors.hpp"

namespace graphbec {

namespace {

using std::numbers::pi;

// kappa * coth(kappa l) and kappa / sinh(kappa l), both -> 1/l as kappa -> 0.
double kappa_coth(double kappa, double l) {
  const double x = kappa * l;
  if (x < 1e-6) return (1.0 + x * x / 3.0) / l;
  return kappa / std::tanh(x);
}

double kappa_csch(double kappa, double l) {
  const double x = kappa * l;
  if (x < 1e-6) return (1.0 - x * x / 6.0) / l;
  if (x > 700.0) return 0.0;
  return kappa / std::sinh(x);
}

struct Root {
  double x = 0.0;
  std::size_t multiplicity = 1;
};

template <class F>
double golden_section_minimum(F&& f, double a, double b, double tolerance) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 400 && b - a > tolerance; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Root finder shared by both branches. The scan variable x is k or kappa;
/// `count(x)` returns the exact number of branch eigenvalues with value < x
/// (or nullopt where ambiguous), `count_at_lo` is that number at `lo`.
class BranchScanner {
 public:
  BranchScanner(const SecularSystem& system, Branch branch, const SpectralOptions& options,
                std::function<std::optional<std::size_t>(double)> count)
      : system_(system), branch_(branch), options_(options), count_(std::move(count)) {}

  std::vector<Root> scan(double lo, double hi, double step, std::size_t count_at_lo) const {
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / step)));
    const double h = (hi - lo) / static_cast<double>(cells);

    std::vector<double> grid(cells + 1);
    std::vector<double> sigma(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) {
      grid[i] = i == cells ? hi : lo + h * static_cast<double>(i);
      sigma[i] = sigma_at(grid[i]);
    }

    std::vector<Root> candidates;
    for (std::size_t i = 1; i <= cells; ++i) {
      const bool left_ok = sigma[i] <= sigma[i - 1];
      const bool right_ok = i == cells || sigma[i] <= sigma[i + 1];
      if (!left_ok || !right_ok) continue;
      const double a = grid[i - 1];
      const double b = i == cells ? hi : grid[i + 1];
      const double x = golden_section_minimum([&](double t) { return sigma_at(t); }, a, b,
                                              options_.root_tolerance);
      if (x <= lo + 1e-9 * h) continue;  // zero mode or lower boundary: handled by caller
      const auto mult = kernel_dimension(x);
      if (mult == 0) continue;
      const bool duplicate = std::any_of(candidates.begin(), candidates.end(), [&](const Root& r) {
        return std::abs(r.x - x) <= 1e-9 * std::max(1.0, x);
      });
      if (!duplicate) candidates.push_back({x, mult});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Root& l, const Root& r) { return l.x < r.x; });

    if (!options_.verify_with_count) return candidates;

    // Cell boundaries where the exact count is unambiguous.
    std::vector<double> bounds(cells + 1);
    std::vector<std::size_t> counts(cells + 1);
    bounds[0] = lo;
    counts[0] = count_at_lo;
    for (std::size_t i = 1; i <= cells; ++i) {
      std::tie(bounds[i], counts[i]) = unambiguous_count(grid[i], h);
    }

    std::vector<Root> verified;
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = bounds[i];
      const double b = bounds[i + 1];
      std::vector<Root> inside;
      std::size_t found = 0;
      for (const Root& r : candidates) {
        if (r.x > a && r.x <= b) {
          inside.push_back(r);
          found += r.multiplicity;
        }
      }
      const std::size_t expected = counts[i + 1] >= counts[i] ? counts[i + 1] - counts[i] : 0;
      if (counts[i + 1] < counts[i]) {
        throw Error(ErrorCode::NoConvergence, "eigenvalue count decreased along the scan");
      }
      if (found == expected) {
        verified.insert(verified.end(), inside.begin(), inside.end());
      } else {
        resolve(a, b, counts[i], counts[i + 1], verified);
      }
    }
    std::sort(verified.begin(), verified.end(),
              [](const Root& l, const Root& r) { return l.x < r.x; });
    return verified;
  }

  double sigma_at(double x) const {
    return system_.smallest_singular_value({branch_, x});
  }

  std::size_t kernel_dimension(double x) const {
    const Eigen::VectorXd sv = system_.singular_values({branch_, x});
    // Rows of M are normalised to O(1); at a root where M vanishes entirely the
    // norm itself is zero, so it is floored at 1.
    const double threshold = options_.multiplicity_threshold * std::max(sv(0), 1.0);
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) <= threshold) ++n;
    }
    return n;
  }

 private:
  std::optional<std::pair<double, std::size_t>> try_count(double x, double h) const {
    for (int j = 0; j < 128; ++j) {
      // 0, +1, -1, +2, -2, ... steps of 1e-4 h
      const double step = static_cast<double>((j + 1) / 2) * (j % 2 == 1 ? 1.0 : -1.0);
      const double shifted = x + step * 1e-4 * h;
      if (const auto c = count_(shifted)) return std::pair{shifted, *c};
    }
    return std::nullopt;
  }

  std::pair<double, std::size_t> unambiguous_count(double x, double h) const {
    if (const auto found = try_count(x, h)) return *found;
    throw Error(ErrorCode::NoConvergence,
                "eigenvalue count ambiguous near x = " + std::to_string(x));
  }

  // Bisects on the exact count until each eigenvalue cluster sits in a tiny
  // interval, then refines it on the singular value.
  void resolve(double a, double b, std::size_t ca, std::size_t cb, std::vector<Root>& out) const {
    if (cb == ca) return;
    const double width_floor = 1e-7 * std::max(1.0, b);
    if (b - a <= width_floor) {
      const double x = golden_section_minimum([&](double t) { return sigma_at(t); }, a, b,
                                              options_.root_tolerance);
      out.push_back({x, cb - ca});
      return;
    }
    // The count is ill-conditioned only next to an eigenvalue (or an edge
    // Dirichlet point), so an ambiguous midpoint ends the bisection.
    const auto found = try_count(0.5 * (a + b), (b - a) * 1e-2);
    if (!found || found->first <= a || found->first >= b) {
      const double x = golden_section_minimum([&](double t) { return sigma_at(t); }, a, b,
                                              options_.root_tolerance);
      out.push_back({x, cb - ca});
      return;
    }
    const auto [mid, cm] = *found;
    if (cm < ca || cm > cb) {
      throw Error(ErrorCode::NoConvergence, "eigenvalue count not monotone during bisection");
    }
    resolve(a, mid, ca, cm, out);
    resolve(mid, b, cm, cb, out);
  }

  const SecularSystem& system_;
  Branch branch_;
  const SpectralOptions& options_;
  std::function<std::optional<std::size_t>(double)> count_;
};

std::size_t total_multiplicity(const std::vector<Level>& levels) {
  std::size_t n = 0;
  for (const Level& l : levels) n += l.multiplicity;
  return n;
}

}  // namespace

std::vector<Level> Spectrum::levels() const {
  std::vector<Level> all = negatives;
  all.insert(all.end(), nonnegatives.begin(), nonnegatives.end());
  return all;
}

std::size_t Spectrum::negative_count() const noexcept { return total_multiplicity(negatives); }

std::size_t Spectrum::nonnegative_count() const noexcept {
  return total_multiplicity(nonnegatives);
}

std::optional<Level> Spectrum::ground() const {
  if (!negatives.empty()) return negatives.front();
  if (!nonnegatives.empty()) return nonnegatives.front();
  return std::nullopt;
}

SecularSystem::SecularSystem(const MetricGraph& g, const VertexConditions& vc)
    : vertex_count_(g.vertex_count()),
      total_length_(g.total_length()),
      max_length_(g.max_edge_length()),
      min_length_(g.min_edge_length()) {
  require_valid(vc, g.boundary_dimension());
  for (const Edge& e : g.edges()) lengths_.push_back(e.length);
  projector_ = vc.projector;
  coupling_ = vc.coupling;
  const auto n = projector_.rows();
  complement_ = ComplexMatrix::Identity(n, n) - projector_;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> proj(projector_);
  std::vector<Eigen::Index> kernel_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(proj.eigenvalues()(i)) < 0.5) kernel_cols.push_back(i);
  }
  kernel_basis_.resize(n, static_cast<Eigen::Index>(kernel_cols.size()));
  for (std::size_t j = 0; j < kernel_cols.size(); ++j) {
    kernel_basis_.col(static_cast<Eigen::Index>(j)) = proj.eigenvectors().col(kernel_cols[j]);
  }
  l_summary_ = l_spectrum(vc);
}

ComplexMatrix SecularSystem::oscillatory_matrix(double k) const {
  const auto E = static_cast<Eigen::Index>(lengths_.size());
  const auto n = 2 * E;
  ComplexMatrix values = ComplexMatrix::Zero(n, n);
  ComplexMatrix derivs = ComplexMatrix::Zero(n, n);
  const double scale = std::max(k, 1.0);
  for (Eigen::Index e = 0; e < E; ++e) {
    const double l = lengths_[static_cast<std::size_t>(e)];
    const double c = std::cos(k * l);
    const double s = std::sin(k * l);
    // second basis function sin(kx)/min(k,1), value at x = l
    const double second_at_end = k >= 1.0 ? s : (k == 0.0 ? l : s / k);
    values(e, e) = 1.0;
    values(E + e, e) = c;
    values(E + e, E + e) = second_at_end;
    // inward derivatives divided by max(k, 1)
    derivs(e, E + e) = 1.0;
    derivs(E + e, e) = (k >= 1.0 ? s : k * s);
    derivs(E + e, E + e) = -c;
  }
  return projector_ * values + complement_ * (derivs + coupling_ * values / scale);
}

ComplexMatrix SecularSystem::decaying_matrix(double kappa) const {
  const ComplexMatrix dtn = dirichlet_to_neumann(-kappa * kappa);
  double scale = 1.0;
  for (double l : lengths_) scale = std::max(scale, kappa_coth(kappa, l));
  return projector_ + complement_ * (dtn + coupling_) / scale;
}

ComplexMatrix SecularSystem::dirichlet_to_neumann(double energy) const {
  const auto E = static_cast<Eigen::Index>(lengths_.size());
  ComplexMatrix dtn = ComplexMatrix::Zero(2 * E, 2 * E);
  for (Eigen::Index e = 0; e < E; ++e) {
    const double l = lengths_[static_cast<std::size_t>(e)];
    double diag = 0.0;
    double off = 0.0;
    if (energy > 0.0) {
      const double k = std::sqrt(energy);
      diag = -k * std::cos(k * l) / std::sin(k * l);
      off = k / std::sin(k * l);
    } else {
      const double kappa = std::sqrt(-energy);
      diag = -kappa_coth(kappa, l);
      off = kappa_csch(kappa, l);
    }
    dtn(e, e) += diag;
    dtn(E + e, E + e) += diag;
    dtn(e, E + e) += off;
    dtn(E + e, e) += off;
  }
  return dtn;
}

ComplexMatrix SecularSystem::matrix(SpectralPoint point) const {
  if (point.value < 0.0 || !std::isfinite(point.value)) {
    throw Error(ErrorCode::InvalidArgument, "spectral point must be finite and non-negative");
  }
  return point.branch == Branch::Negative ? decaying_matrix(point.value)
                                          : oscillatory_matrix(point.value);
}

Eigen::VectorXd SecularSystem::singular_values(SpectralPoint point) const {
  const ComplexMatrix m = matrix(point);
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double SecularSystem::smallest_singular_value(SpectralPoint point) const {
  const Eigen::VectorXd sv = singular_values(point);
  return sv(sv.size() - 1);
}

std::optional<std::size_t> SecularSystem::count_below(double energy) const {
  std::size_t dirichlet = 0;
  if (energy > 0.0) {
    const double k = std::sqrt(energy);
    for (double l : lengths_) {
      const double x = k * l / pi;
      const double nearest = std::round(x);
      if (nearest >= 1.0 && std::abs(x - nearest) < 1e-9 * std::max(1.0, x)) return std::nullopt;
      dirichlet += static_cast<std::size_t>(std::floor(x));
    }
  }
  if (kernel_basis_.cols() == 0) return dirichlet;

  const ComplexMatrix restricted =
      kernel_basis_.adjoint() * (dirichlet_to_neumann(energy) + coupling_) * kernel_basis_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(restricted, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::size_t positive = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    // Hermitian eigenvalues carry ~eps * ||A|| absolute error
    if (std::abs(ev(i)) < 1e-11 * scale) return std::nullopt;
    if (ev(i) > 0.0) ++positive;
  }
  return dirichlet + positive;
}

std::size_t SecularSystem::negative_eigenvalue_count() const {
  if (kernel_basis_.cols() == 0) return 0;
  const ComplexMatrix restricted =
      kernel_basis_.adjoint() * (dirichlet_to_neumann(0.0) + coupling_) * kernel_basis_;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(restricted, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return static_cast<std::size_t>((ev.array() > 1e-9 * scale).count());
}

double secular_value(const MetricGraph& g, const VertexConditions& vc, SpectralPoint point) {
  return SecularSystem(g, vc).smallest_singular_value(point);
}

double decaying_scan_limit(const SecularSystem& system) {
  const double l_max = std::max(system.coupling_spectrum().l_max, 0.0);
  const double simple = 2.0 * std::max(l_max, 1.0);
  // Q[F] >= (1 - L_max a)||f'||^2 - (2 L_max / a)||f||^2 for a <= l_min / 2.
  const double trace = 1.1 * std::sqrt(2.0 * l_max * std::max(l_max, 2.0 / system.min_edge_length()));
  return std::max(simple, trace);
}

Spectrum positive_spectrum(const SecularSystem& system, double e_max,
                           const SpectralOptions& options) {
  if (!(e_max > 0.0) || !std::isfinite(e_max)) {
    throw Error(ErrorCode::CutoffTooSmall, "E_max must be positive and finite");
  }
  Spectrum spectrum;
  spectrum.total_length = system.total_length();
  spectrum.cutoff = e_max;

  const double k_max = std::sqrt(e_max);
  const double step = std::min(pi / (4.0 * system.max_edge_length()), options.max_step);

  const std::size_t negatives = system.negative_eigenvalue_count();

  BranchScanner counted(system, Branch::Nonnegative, options,
                        [&](double k) -> std::optional<std::size_t> {
                          const auto c = system.count_below(k * k);
                          if (!c) return std::nullopt;
                          if (*c < negatives) return std::nullopt;
                          return *c - negatives;
                        });
  // E = 0 uses the linear ansatz, which is the k -> 0 limit of the basis.
  const std::size_t zero_modes = counted.kernel_dimension(0.0);
  const auto roots = counted.scan(0.0, k_max, step, zero_modes);

  if (zero_modes > 0) spectrum.nonnegatives.push_back({0.0, zero_modes});
  for (const Root& r : roots) {
    if (r.x > k_max) continue;
    spectrum.nonnegatives.push_back({r.x * r.x, r.multiplicity});
  }

  if (spectrum.nonnegatives.empty()) {
    const double weyl_floor = system.total_length() * k_max / pi -
                              static_cast<double>(2 * system.edge_count() + system.vertex_count());
    if (weyl_floor >= 1.0) {
      throw Error(ErrorCode::CutoffTooSmall,
                  "no eigenvalues found below E_max where the Weyl count predicts some");
    }
  }
  return spectrum;
}

Spectrum positive_spectrum(const MetricGraph& g, const VertexConditions& vc, double e_max,
                           const SpectralOptions& options) {
  return positive_spectrum(SecularSystem(g, vc), e_max, options);
}

Spectrum negative_spectrum(const SecularSystem& system, const SpectralOptions& options) {
  Spectrum spectrum;
  spectrum.total_length = system.total_length();

  const std::size_t bound = system.coupling_spectrum().count_positive;
  const std::size_t total = system.negative_eigenvalue_count();
  if (total > bound) {
    throw Error(ErrorCode::BoundViolation,
                "count reports " + std::to_string(total) + " negative eigenvalues, L has only " +
                    std::to_string(bound) + " positive eigenvalues");
  }
  if (total == 0 && (bound == 0 || options.verify_with_count)) return spectrum;

  double kappa_max = decaying_scan_limit(system);
  for (int i = 0; i < 60; ++i) {
    const auto c = system.count_below(-kappa_max * kappa_max);
    if (c && *c == 0) break;
    kappa_max *= 2.0;
  }

  // Count of bound states with kappa_j < kappa, increasing in kappa.
  BranchScanner scanner(system, Branch::Negative, options,
                        [&](double kappa) -> std::optional<std::size_t> {
                          const auto c = system.count_below(-kappa * kappa);
                          if (!c || *c > total) return std::nullopt;
                          return total - *c;
                        });
  const double step = std::min(options.max_step, kappa_max / 200.0);
  const auto roots = scanner.scan(0.0, kappa_max, step, 0);

  std::size_t found = 0;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    spectrum.negatives.push_back({-it->x * it->x, it->multiplicity});
    found += it->multiplicity;
  }
  if (found > bound) {
    throw Error(ErrorCode::BoundViolation,
                "found " + std::to_string(found) + " negative eigenvalues, L has only " +
                    std::to_string(bound) + " positive eigenvalues");
  }
  return spectrum;
}

Spectrum negative_spectrum(const MetricGraph& g, const VertexConditions& vc,
                           const SpectralOptions& options) {
  return negative_spectrum(SecularSystem(g, vc), options);
}

Spectrum full_spectrum(const SecularSystem& system, double e_max, const SpectralOptions& options) {
  Spectrum spectrum = positive_spectrum(system, e_max, options);
  spectrum.negatives = negative_spectrum(system, options).negatives;
  return spectrum;
}

Spectrum full_spectrum(const MetricGraph& g, const VertexConditions& vc, double e_max,
                       const SpectralOptions& options) {
  return full_spectrum(SecularSystem(g, vc), e_max, options);
}

double ground_state_energy(const MetricGraph& g, const VertexConditions& vc, double e_max,
                           const SpectralOptions& options) {
  const SecularSystem system(g, vc);
  const Spectrum negatives = negative_spectrum(system, options);
  if (!negatives.negatives.empty()) return negatives.negatives.front().energy;
  const Spectrum positives = positive_spectrum(system, e_max, options);
  if (positives.nonnegatives.empty()) {
    throw Error(ErrorCode::CutoffTooSmall, "no eigenvalue below E_max");
  }
  return positives.nonnegatives.front().energy;
}

double weyl_deviation(const Spectrum& spectrum) {
  const double slope = spectrum.total_length / pi;
  double deviation = 0.0;
  double count = static_cast<double>(spectrum.negative_count());  // N(0)
  for (const Level& level : spectrum.nonnegatives) {
    const double k = std::sqrt(std::max(level.energy, 0.0));
    deviation = std::max(deviation, std::abs(count - slope * k));  // left limit
    count += static_cast<double>(level.multiplicity);
    deviation = std::max(deviation, std::abs(count - slope * k));
  }
  const double k_end = std::sqrt(std::max(spectrum.cutoff, 0.0));
  deviation = std::max(deviation, std::abs(count - slope * k_end));
  return deviation;
}

}  // namespace graphbec
