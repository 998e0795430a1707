#include "graphbec/vertex_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>

#include "graphbec/errors.hpp"

namespace graphbec {

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::WrongShape: return "WrongShape";
    case ViolationKind::NotHermitianProjector: return "NotHermitianProjector";
    case ViolationKind::NotAProjector: return "NotAProjector";
    case ViolationKind::CouplingNotHermitian: return "CouplingNotHermitian";
    case ViolationKind::CouplingLeavesKernel: return "CouplingLeavesKernel";
    case ViolationKind::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<Violation> validate(const VertexConditions& vc, std::size_t expected_dimension) {
  std::vector<Violation> out;
  const auto& P = vc.projector;
  const auto& L = vc.coupling;
  if (P.rows() != P.cols() || L.rows() != L.cols() || P.rows() != L.rows() ||
      (expected_dimension != 0 && static_cast<std::size_t>(P.rows()) != expected_dimension)) {
    out.push_back({ViolationKind::WrongShape,
                   "P and L must both be square of dimension 2E" +
                       (expected_dimension ? " = " + std::to_string(expected_dimension)
                                           : std::string{})});
    return out;
  }
  if (!P.allFinite() || !L.allFinite()) {
    out.push_back({ViolationKind::NonFinite, "P or L has non-finite entries"});
    return out;
  }
  if (max_abs(P - P.adjoint()) > kConditionTolerance) {
    out.push_back({ViolationKind::NotHermitianProjector, "P is not self-adjoint"});
  }
  if (max_abs(P * P - P) > kConditionTolerance) {
    out.push_back({ViolationKind::NotAProjector, "not a projector: P*P != P"});
  }
  if (max_abs(L - L.adjoint()) > kConditionTolerance) {
    out.push_back({ViolationKind::CouplingNotHermitian, "L is not self-adjoint"});
  }
  if (max_abs(P * L) > kConditionTolerance || max_abs(L * P) > kConditionTolerance) {
    out.push_back({ViolationKind::CouplingLeavesKernel,
                   "L not an endomorphism of ker P: P*L or L*P is nonzero"});
  }
  return out;
}

void require_valid(const VertexConditions& vc, std::size_t expected_dimension) {
  const auto violations = validate(vc, expected_dimension);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidConditions, violations.front().message);
  }
}

LSpectrumSummary l_spectrum(const VertexConditions& vc) {
  require_valid(vc);
  LSpectrumSummary summary;
  const auto n = vc.projector.rows();
  if (n == 0) return summary;

  // Orthonormal basis of ker P from the eigenvectors of P with eigenvalue ~ 0.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> proj(vc.projector);
  std::vector<Eigen::Index> kernel_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(proj.eigenvalues()(i)) < 0.5) kernel_cols.push_back(i);
  }
  if (kernel_cols.empty()) return summary;

  ComplexMatrix basis(n, static_cast<Eigen::Index>(kernel_cols.size()));
  for (std::size_t j = 0; j < kernel_cols.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = proj.eigenvectors().col(kernel_cols[j]);
  }
  const ComplexMatrix restricted = basis.adjoint() * vc.coupling * basis;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> coupling(restricted, Eigen::EigenvaluesOnly);

  const auto& ev = coupling.eigenvalues();
  summary.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(summary.eigenvalues.begin(), summary.eigenvalues.end(), std::greater<>());
  summary.l_max = summary.eigenvalues.front();
  // Positivity is judged with the same tolerance the invariants use.
  summary.count_positive = static_cast<std::size_t>(
      std::count_if(summary.eigenvalues.begin(), summary.eigenvalues.end(),
                    [](double x) { return x > kConditionTolerance; }));
  return summary;
}

VertexConditions preset_dirichlet(const MetricGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.boundary_dimension());
  return {ComplexMatrix::Identity(n, n), ComplexMatrix::Zero(n, n)};
}

VertexConditions preset_neumann(const MetricGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.boundary_dimension());
  return {ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
}

VertexConditions preset_delta(const MetricGraph& g, std::span<const double> strengths) {
  if (strengths.size() != g.vertex_count()) {
    throw Error(ErrorCode::MissingStrength,
                "delta coupling needs one strength per vertex: got " +
                    std::to_string(strengths.size()) + ", graph has " +
                    std::to_string(g.vertex_count()));
  }
  const std::size_t E = g.edge_count();
  const auto n = static_cast<Eigen::Index>(g.boundary_dimension());
  ComplexMatrix P = ComplexMatrix::Identity(n, n);
  ComplexMatrix L = ComplexMatrix::Zero(n, n);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!std::isfinite(strengths[v])) {
      throw Error(ErrorCode::MissingStrength,
                  "strength at vertex " + std::to_string(v) + " is not finite");
    }
    const auto ends = g.incident_ends(v);
    const double d = static_cast<double>(ends.size());
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
    for (const EdgeEnd& end : ends) u(static_cast<Eigen::Index>(end.index(E))) = 1.0 / std::sqrt(d);
    const ComplexMatrix uu = u * u.adjoint();
    P -= uu;
    L += (-strengths[v] / d) * uu;
  }
  return {P, L};
}

VertexConditions preset_kirchhoff(const MetricGraph& g) {
  const std::vector<double> zeros(g.vertex_count(), 0.0);
  return preset_delta(g, zeros);
}

}  // namespace graphbec
