#include "opml/knn_graph.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "opml/error.hpp"

namespace opml {

WeightedDigraph::WeightedDigraph(Index n, std::vector<std::vector<Edge>> out_edges)
    : n_(n), out_edges_(std::move(out_edges)) {
  if (n_ < 1 || static_cast<Index>(out_edges_.size()) != n_) {
    throw InvalidArgument("knn-graph", "edge list size does not match node count");
  }
  degree_.resize(static_cast<std::size_t>(n_));
  transition_.resize(static_cast<std::size_t>(n_));
  std::vector<Index> in_count(static_cast<std::size_t>(n_) + 1, 0);
  for (Index i = 0; i < n_; ++i) {
    const auto& edges = out_edges_[static_cast<std::size_t>(i)];
    if (edges.empty()) {
      throw InvalidArgument("knn-graph", "node " + std::to_string(i) + " has no out-edges");
    }
    double deg = 0.0;
    for (const Edge& e : edges) {
      if (e.target == i) throw InvalidArgument("knn-graph", "self edge at node " + std::to_string(i));
      if (e.target < 0 || e.target >= n_) throw InvalidArgument("knn-graph", "edge target out of range");
      if (!(e.weight > 0.0 && e.weight <= 1.0)) {
        throw InvalidArgument("knn-graph", "edge weight outside (0, 1]");
      }
      deg += e.weight;
      ++in_count[static_cast<std::size_t>(e.target) + 1];
    }
    degree_[static_cast<std::size_t>(i)] = deg;
    auto& row = transition_[static_cast<std::size_t>(i)];
    row.reserve(edges.size());
    for (const Edge& e : edges) row.push_back(e.weight / deg);
  }

  // Incoming edges grouped by target, sources in ascending order.
  in_edges_.offsets.assign(in_count.begin(), in_count.end());
  for (Index j = 0; j < n_; ++j) in_edges_.offsets[j + 1] += in_edges_.offsets[j];
  in_edges_.sources.resize(static_cast<std::size_t>(in_edges_.offsets.back()));
  in_edges_.probs.resize(in_edges_.sources.size());
  std::vector<Index> cursor(in_edges_.offsets.begin(), in_edges_.offsets.end() - 1);
  for (Index i = 0; i < n_; ++i) {
    const auto& edges = out_edges_[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const Index slot = cursor[static_cast<std::size_t>(edges[k].target)]++;
      in_edges_.sources[static_cast<std::size_t>(slot)] = i;
      in_edges_.probs[static_cast<std::size_t>(slot)] = transition_[static_cast<std::size_t>(i)][k];
    }
  }
}

double WeightedDigraph::transition_to(Index i, Index j) const {
  const auto& edges = out_edges(i);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (edges[k].target == j) return transition(i, k);
  }
  return 0.0;
}

double WeightedDigraph::weight_to(Index i, Index j) const {
  for (const Edge& e : out_edges(i)) {
    if (e.target == j) return e.weight;
  }
  return 0.0;
}

WeightedDigraph build_knn_graph(const FeatureMatrix& X, Index k_graph, double c) {
  const Index n = X.n();
  if (n < 2) throw EmptyDatasetError("knn-graph", "need at least 2 examples to build a kNN graph");
  if (k_graph < 1 || k_graph > n - 1) {
    throw InvalidArgument("knn-graph", "k_graph must lie in [1, n-1], got " + std::to_string(k_graph));
  }
  if (!(c > 0.0)) throw InvalidArgument("knn-graph", "scale c must be positive");

  const kernels::KnnRows knn = kernels::omp::knn_rows(X.data(), k_graph);
  if (knn.max_sq_dist == 0.0) {
    throw DegenerateGeometryError("knn-graph", "all points are identical (max pairwise distance is 0)");
  }
  std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    auto& row = edges[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(k_graph));
    for (Index r = 0; r < k_graph; ++r) {
      const auto slot = static_cast<std::size_t>(i * k_graph + r);
      const double w = std::exp(-2.0 * c * c * knn.sq_dist[slot] / knn.max_sq_dist);
      // Underflow to 0 would break W in (0, 1]; clamp to the smallest normal.
      row.push_back({knn.neighbors[slot], std::max(w, std::numeric_limits<double>::min())});
    }
  }
  return WeightedDigraph(n, std::move(edges));
}

std::vector<double> teleport_step(const WeightedDigraph& G, std::span<const double> omega,
                                  double teleport) {
  const Index n = G.n();
  std::vector<double> next(static_cast<std::size_t>(n));
  kernels::omp::gather(G.in_edges(), omega, next);
  double mass = 0.0;
  for (const double w : omega) mass += w;
  const double jump = teleport * mass / static_cast<double>(n);
  for (double& v : next) v = (1.0 - teleport) * v + jump;
  return next;
}

StationaryDistribution stationary_distribution(const WeightedDigraph& G,
                                               const StationaryOptions& options) {
  if (!(options.teleport >= 0.0 && options.teleport < 1.0)) {
    throw InvalidArgument("knn-graph", "teleport must lie in [0, 1)");
  }
  if (options.max_iters < 1) throw InvalidArgument("knn-graph", "max_iters must be positive");
  const Index n = G.n();
  StationaryDistribution out;
  out.omega.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
  double residual = 0.0;
  for (int it = 0; it < options.max_iters; ++it) {
    std::vector<double> next = teleport_step(G, out.omega, options.teleport);
    residual = 0.0;
    for (Index j = 0; j < n; ++j) residual += std::abs(next[j] - out.omega[j]);
    out.iterations = it;
    out.residual = residual;
    if (residual <= options.tol) return out;
    double sum = 0.0;
    for (const double v : next) sum += v;
    for (double& v : next) v /= sum;
    out.omega = std::move(next);
  }
  throw ConvergenceError("knn-graph",
                         "power iteration did not converge in " + std::to_string(options.max_iters) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual);
}

}  // namespace opml
