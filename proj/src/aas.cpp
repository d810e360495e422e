#include "opml/aas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "opml/diag.hpp"
#include "opml/error.hpp"

namespace opml {

void AASConfig::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("aas-clustering", "gamma must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("aas-clustering", "epsilon must be positive");
  if (!(theta_min >= 0.0 && theta_min <= 100.0)) {
    throw ConfigError("aas-clustering", "theta_min must lie in [0, 100]");
  }
  if (k_graph < 1) throw ConfigError("aas-clustering", "k_graph must be positive");
  if (!(c > 0.0)) throw ConfigError("aas-clustering", "c must be positive");
  if (!(teleport >= 0.0 && teleport < 1.0)) throw ConfigError("aas-clustering", "teleport must lie in [0, 1)");
  if (epsilon > 1.0) {
    diag::warn("epsilon > 1 exceeds every edge weight; each node becomes its own cluster");
  }
}

double node_relevancy(const WeightedDigraph& G, std::span<const double> omega, Index i, Index j,
                      double gamma) {
  // d_i * T_ij is W_ij by construction; use the stored weight.
  const double w = G.weight_to(i, j);
  if (w == 0.0) return 0.0;
  const double grad = omega[j] - omega[i];
  return w * std::exp(-gamma * grad * grad);
}

std::vector<Index> relevant_neighbors(const WeightedDigraph& G, std::span<const double> omega,
                                      Index i, double epsilon, double gamma) {
  std::vector<Index> out{i};
  for (const Edge& e : G.out_edges(i)) {
    const double grad = omega[e.target] - omega[i];
    if (e.weight * std::exp(-gamma * grad * grad) > epsilon) out.push_back(e.target);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Index authority_ascent_step(const WeightedDigraph& G, std::span<const double> omega, Index i,
                            double epsilon, double gamma) {
  const auto& edges = G.out_edges(i);
  Index best = i;
  double best_score = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Index j = edges[k].target;
    const double grad = omega[j] - omega[i];
    if (!(edges[k].weight * std::exp(-gamma * grad * grad) > epsilon)) continue;
    const double score = G.transition(i, k) * grad;
    if (score > best_score || (score == best_score && score > 0.0 && j < best)) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

ClusterAssignment cluster(const WeightedDigraph& G, std::span<const double> omega,
                          const AASConfig& cfg) {
  const Index n = G.n();
  if (static_cast<Index>(omega.size()) != n) {
    throw DimensionMismatch("aas-clustering", "omega length does not match graph size");
  }

  std::vector<Index> step(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    step[static_cast<std::size_t>(i)] = authority_ascent_step(G, omega, i, cfg.epsilon, cfg.gamma);
  }

  // Resolve modes with path compression.
  std::vector<Index> mode(static_cast<std::size_t>(n), -1);
  std::vector<Index> path;
  for (Index i = 0; i < n; ++i) {
    path.clear();
    Index cur = i;
    while (mode[static_cast<std::size_t>(cur)] < 0) {
      const Index next = step[static_cast<std::size_t>(cur)];
      if (next == cur) {
        mode[static_cast<std::size_t>(cur)] = cur;
        break;
      }
      path.push_back(cur);
      if (static_cast<Index>(path.size()) > n) {
        throw CycleError("aas-clustering", "authority ascent from node " + std::to_string(i) +
                                               " did not reach a mode within N steps");
      }
      cur = next;
    }
    const Index m = mode[static_cast<std::size_t>(cur)];
    for (const Index p : path) mode[static_cast<std::size_t>(p)] = m;
  }

  // Cluster authority per mode, summed in node order.
  std::map<Index, double> authority;
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    authority[mode[static_cast<std::size_t>(i)]] += omega[i];
    total += omega[i];
  }
  std::vector<std::pair<double, Index>> survivors;
  const double threshold = cfg.theta_min / 100.0 * total;
  for (const auto& [m, a] : authority) {
    if (a >= threshold) survivors.emplace_back(a, m);
  }
  std::sort(survivors.begin(), survivors.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  std::map<Index, int> label_of_mode;
  ClusterAssignment out;
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    label_of_mode[survivors[k].second] = static_cast<int>(k);
    out.cluster_authority.push_back(survivors[k].first);
  }
  out.n_clusters = static_cast<int>(survivors.size());
  out.mode_of = std::move(mode);
  out.labels.resize(static_cast<std::size_t>(n), kNoise);
  for (Index i = 0; i < n; ++i) {
    const auto it = label_of_mode.find(out.mode_of[static_cast<std::size_t>(i)]);
    if (it != label_of_mode.end()) out.labels[static_cast<std::size_t>(i)] = it->second;
  }
  return out;
}

ClusterAssignment aas_cluster(const FeatureMatrix& X, const AASConfig& cfg) {
  cfg.validate();
  Index k_graph = cfg.k_graph;
  if (X.n() >= 2 && k_graph > X.n() - 1) {
    diag::warn("k_graph " + std::to_string(k_graph) + " clipped to n-1 = " + std::to_string(X.n() - 1));
    k_graph = X.n() - 1;
  }
  const WeightedDigraph G = build_knn_graph(X, k_graph, cfg.c);
  StationaryOptions opts;
  opts.teleport = cfg.teleport;
  const StationaryDistribution omega = stationary_distribution(G, opts);
  return cluster(G, omega.omega, cfg);
}

}  // namespace opml
