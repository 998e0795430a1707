#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphbec/graph.hpp"

namespace graphbec {

using ComplexMatrix = Eigen::MatrixXcd;

/// Self-adjoint vertex conditions on the 2E boundary values.
///
/// Functions in the operator domain satisfy
///   P F_bv = 0   and   (1 - P)(F'_bv + L F_bv) = 0,
/// where F'_bv collects inward derivatives (+f'(0) at x = 0, -f'(l) at x = l).
/// The associated quadratic form is  sum_e int |f_e'|^2 - <F_bv, L F_bv>,
/// so a positive eigenvalue of L lowers the energy and binds a state.
struct VertexConditions {
  ComplexMatrix projector;  // P
  ComplexMatrix coupling;   // L, acting on ker P

  std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(projector.rows());
  }
};

enum class ViolationKind {
  WrongShape,
  NotHermitianProjector,
  NotAProjector,
  CouplingNotHermitian,
  CouplingLeavesKernel,
  NonFinite,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string message;
};

inline constexpr double kConditionTolerance = 1e-12;

/// Checks every VertexConditions invariant and lists the violated ones.
/// `expected_dimension` is 2E; pass 0 to skip the shape check against a graph.
std::vector<Violation> validate(const VertexConditions& vc, std::size_t expected_dimension = 0);

/// Throws Error{InvalidConditions} carrying the first violation.
void require_valid(const VertexConditions& vc, std::size_t expected_dimension = 0);

/// Spectrum of L restricted to ker P, sorted descending.
struct LSpectrumSummary {
  std::vector<double> eigenvalues;
  double l_max = 0.0;  // largest eigenvalue; 0 when ker P = {0}
  std::size_t count_positive = 0;
};

LSpectrumSummary l_spectrum(const VertexConditions& vc);

/// P = 1, L = 0: every boundary value vanishes.
VertexConditions preset_dirichlet(const MetricGraph& g);

/// P = 0, L = 0: every inward derivative vanishes, edges decoupled.
VertexConditions preset_neumann(const MetricGraph& g);

/// Continuity at each vertex with sum of inward derivatives = alpha_v f(v),
/// i.e. a form contribution alpha_v |f(v)|^2. On the continuity vector of a
/// degree-d vertex L has eigenvalue -alpha_v / d; alpha_v < 0 is attractive.
/// `strengths` holds one entry per vertex (MissingStrength otherwise).
VertexConditions preset_delta(const MetricGraph& g, std::span<const double> strengths);

/// Continuity plus vanishing derivative sum (all alpha_v = 0).
VertexConditions preset_kirchhoff(const MetricGraph& g);

}  // namespace graphbec
