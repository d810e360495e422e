#pragma once

#include <iosfwd>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "opml/features.hpp"
#include "opml/types.hpp"

namespace opml {

struct PairwiseScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct EvalReport {
  double nmi = 0.0;
  double f_measure = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::map<int, double> recall_at_k;  // percent
};

/// Replaces every noise label with a fresh label not used elsewhere.
std::vector<int> expand_noise(std::span<const int> labels);

/// Mutual information over the mean of the two entropies (natural log).
/// Noise entries in `pred` count as singletons.
double nmi(std::span<const int> pred, std::span<const int> truth);

/// Pair-counting precision, recall and F over all unordered pairs. Noise
/// entries in `pred` count as singletons.
PairwiseScores pairwise_prf(std::span<const int> pred, std::span<const int> truth);

/// Percentage of queries with a same-label example among their K nearest
/// neighbors (Euclidean, self excluded, ties by index). K >= n is clipped to
/// n - 1 with a warning.
std::map<int, double> recall_at_k(const FeatureMatrix& E, std::span<const int> truth,
                                  const std::vector<int>& Ks);

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;  // k x d
  double inertia = 0.0;
  int iterations = 0;
};

/// Lloyd iterations from k-means++ seeding.
KMeansResult kmeans(const FeatureMatrix& X, int k, std::uint64_t seed, int max_iters = 300);

/// Lowest-inertia run over seeds seed, seed+1, ..., seed+restarts-1 (first wins ties).
KMeansResult kmeans_best_of(const FeatureMatrix& X, int k, std::uint64_t seed, int restarts);

/// NMI, pairwise P/R/F and (optionally) Recall@K in one report.
EvalReport evaluate_clustering(std::span<const int> pred, std::span<const int> truth);

/// "name value" lines, 17 significant digits.
void write_report(std::ostream& os, const EvalReport& report, bool include_clustering = true);

}  // namespace opml
