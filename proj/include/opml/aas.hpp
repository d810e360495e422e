#pragma once

#include <vector>

#include "opml/knn_graph.hpp"
#include "opml/types.hpp"

namespace opml {

/// Authority Ascent Shift hyperparameters.
struct AASConfig {
  double gamma = 100.0;
  double epsilon = 0.65;
  double theta_min = 0.0;  // percent of total authority
  Index k_graph = 75;
  double c = 1.0;
  double teleport = 0.01;

  /// Throws ConfigError on out-of-range values; warns when epsilon > 1,
  /// which leaves every node as its own mode.
  void validate() const;
};

struct ClusterAssignment {
  std::vector<int> labels;     // cluster id, or kNoise
  int n_clusters = 0;
  std::vector<Index> mode_of;  // authority mode of each node
  std::vector<double> cluster_authority;  // by surviving label

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

/// psi(i, j) = d_i T_ij exp(-gamma (omega_j - omega_i)^2); 0 without an edge.
double node_relevancy(const WeightedDigraph& G, std::span<const double> omega, Index i, Index j,
                      double gamma);

/// {j : psi(i, j) > epsilon} together with i, ascending.
std::vector<Index> relevant_neighbors(const WeightedDigraph& G, std::span<const double> omega,
                                      Index i, double epsilon, double gamma);

/// Relevant neighbor maximizing T_ij (omega_j - omega_i) when that maximum
/// is positive, else i itself. Ties go to the smallest index.
Index authority_ascent_step(const WeightedDigraph& G, std::span<const double> omega, Index i,
                            double epsilon, double gamma);

/// Follows ascent steps to authority modes, groups nodes by mode, drops
/// clusters under theta_min percent of total authority as noise, and numbers
/// the survivors by descending authority.
ClusterAssignment cluster(const WeightedDigraph& G, std::span<const double> omega,
                          const AASConfig& cfg);

/// Graph, stationary distribution and clustering in one call.
ClusterAssignment aas_cluster(const FeatureMatrix& X, const AASConfig& cfg);

}  // namespace opml
