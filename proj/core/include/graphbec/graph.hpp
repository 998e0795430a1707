#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphbec {

/// One edge of a metric graph, identified with the interval [0, length].
/// The parametrisation runs from `start` (x = 0) to `end` (x = length).
struct Edge {
  std::size_t start = 0;
  std::size_t end = 0;
  double length = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Position of an edge endpoint in the 2E-dimensional boundary-value space.
/// Starts come first: index e is the x = 0 end of edge e, index E + e is the
/// x = l_e end.
struct EdgeEnd {
  std::size_t edge = 0;
  bool at_end = false;  // false: x = 0, true: x = l_e

  std::size_t index(std::size_t edge_count) const noexcept {
    return at_end ? edge_count + edge : edge;
  }
};

/// Compact, connected metric graph. Loops and parallel edges are allowed.
/// Vertices are numbered 0..vertex_count-1. Immutable once constructed.
class MetricGraph {
 public:
  /// Throws Error{NonPositiveLength, DanglingEndpoint, DisconnectedGraph}.
  MetricGraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  /// Dimension of the boundary-value space, 2E.
  std::size_t boundary_dimension() const noexcept { return 2 * edges_.size(); }

  /// Edge ends incident to vertex v; a loop contributes both of its ends.
  std::vector<EdgeEnd> incident_ends(std::size_t v) const;
  std::size_t degree(std::size_t v) const;

  double total_length() const noexcept;
  double max_edge_length() const noexcept;
  double min_edge_length() const noexcept;

  /// Same combinatorics, every length multiplied by eta. Throws NonPositiveScale.
  MetricGraph scaled(double eta) const;

  friend bool operator==(const MetricGraph&, const MetricGraph&) = default;

 private:
  std::size_t vertex_count_;
  std::vector<Edge> edges_;
};

inline MetricGraph scale(const MetricGraph& g, double eta) { return g.scaled(eta); }
inline double total_length(const MetricGraph& g) noexcept { return g.total_length(); }

namespace graphs {

MetricGraph interval(double length);
MetricGraph loop(double length);
/// Star with centre vertex 0 and leaves 1..n; every edge starts at the centre.
MetricGraph star(std::span<const double> lengths);
MetricGraph equilateral_star(std::size_t arms, double length);

}  // namespace graphs

}  // namespace graphbec
