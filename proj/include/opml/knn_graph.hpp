#pragma once

#include <span>
#include <vector>

#include "opml/features.hpp"
#include "opml/kernels.hpp"
#include "opml/types.hpp"

namespace opml {

struct Edge {
  Index target;
  double weight;  // W_ij in (0, 1]
};

/// Directed weighted graph with its row-stochastic transition matrix
/// T_ij = W_ij / d_i, where d_i is the weighted out-degree.
class WeightedDigraph {
 public:
  /// Validates: no self edges, targets in range, 0 < W <= 1, at least one
  /// out-edge per node.
  WeightedDigraph(Index n, std::vector<std::vector<Edge>> out_edges);

  Index n() const { return n_; }
  const std::vector<Edge>& out_edges(Index i) const { return out_edges_[static_cast<std::size_t>(i)]; }
  double out_degree(Index i) const { return degree_[static_cast<std::size_t>(i)]; }
  /// T_ij for the k-th out-edge of i.
  double transition(Index i, std::size_t k) const { return transition_[static_cast<std::size_t>(i)][k]; }
  /// T_ij, or 0 when there is no edge i -> j.
  double transition_to(Index i, Index j) const;
  /// W_ij, or 0 when there is no edge i -> j.
  double weight_to(Index i, Index j) const;

  const kernels::InEdges& in_edges() const { return in_edges_; }

 private:
  Index n_;
  std::vector<std::vector<Edge>> out_edges_;
  std::vector<double> degree_;
  std::vector<std::vector<double>> transition_;
  kernels::InEdges in_edges_;
};

/// Directed kNN graph, W_ij = exp(-2 c^2 d2_ij / d2_max) with d2 the squared
/// Euclidean distance and d2_max its exact maximum over all pairs.
WeightedDigraph build_knn_graph(const FeatureMatrix& X, Index k_graph, double c);

struct StationaryOptions {
  double teleport = 0.01;
  double tol = 1e-10;
  int max_iters = 10000;
};

struct StationaryDistribution {
  std::vector<double> omega;
  double residual = 0.0;  // ||omega^T T' - omega^T||_1 of the returned omega
  int iterations = 0;
};

/// Power iteration from the uniform vector on T' = (1 - teleport) T + teleport/n.
StationaryDistribution stationary_distribution(const WeightedDigraph& G,
                                               const StationaryOptions& options = {});

/// omega^T T' for the teleport-smoothed transition matrix.
std::vector<double> teleport_step(const WeightedDigraph& G, std::span<const double> omega,
                                  double teleport);

}  // namespace opml
