#include "graphbec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphbec/errors.hpp"

namespace graphbec {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ == 0) {
    throw Error(ErrorCode::InvalidArgument, "graph needs at least one vertex");
  }
  if (edges_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "graph needs at least one edge");
  }
  std::vector<std::size_t> parent(vertex_count_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw Error(ErrorCode::NonPositiveLength,
                  "edge " + std::to_string(e) + " has non-positive or non-finite length");
    }
    if (edge.start >= vertex_count_ || edge.end >= vertex_count_) {
      throw Error(ErrorCode::DanglingEndpoint,
                  "edge " + std::to_string(e) + " references a vertex outside 0.." +
                      std::to_string(vertex_count_ - 1));
    }
    parent[find_root(parent, edge.start)] = find_root(parent, edge.end);
  }
  const std::size_t root = find_root(parent, 0);
  for (std::size_t v = 1; v < vertex_count_; ++v) {
    if (find_root(parent, v) != root) {
      throw Error(ErrorCode::DisconnectedGraph,
                  "vertex " + std::to_string(v) + " is not connected to vertex 0");
    }
  }
}

std::vector<EdgeEnd> MetricGraph::incident_ends(std::size_t v) const {
  std::vector<EdgeEnd> ends;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].start == v) ends.push_back({e, false});
    if (edges_[e].end == v) ends.push_back({e, true});
  }
  return ends;
}

std::size_t MetricGraph::degree(std::size_t v) const { return incident_ends(v).size(); }

double MetricGraph::total_length() const noexcept {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.length;
  return sum;
}

double MetricGraph::max_edge_length() const noexcept {
  return std::max_element(edges_.begin(), edges_.end(),
                          [](const Edge& a, const Edge& b) { return a.length < b.length; })
      ->length;
}

double MetricGraph::min_edge_length() const noexcept {
  return std::min_element(edges_.begin(), edges_.end(),
                          [](const Edge& a, const Edge& b) { return a.length < b.length; })
      ->length;
}

MetricGraph MetricGraph::scaled(double eta) const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::NonPositiveScale, "scale factor must be positive and finite");
  }
  std::vector<Edge> edges = edges_;
  for (Edge& e : edges) e.length *= eta;
  return MetricGraph(vertex_count_, std::move(edges));
}

namespace graphs {

MetricGraph interval(double length) { return MetricGraph(2, {{0, 1, length}}); }

MetricGraph loop(double length) { return MetricGraph(1, {{0, 0, length}}); }

MetricGraph star(std::span<const double> lengths) {
  std::vector<Edge> edges;
  edges.reserve(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) edges.push_back({0, i + 1, lengths[i]});
  return MetricGraph(lengths.size() + 1, std::move(edges));
}

MetricGraph equilateral_star(std::size_t arms, double length) {
  const std::vector<double> lengths(arms, length);
  return star(lengths);
}

}  // namespace graphs

}  // namespace graphbec
