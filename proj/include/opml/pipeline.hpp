#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "opml/aas.hpp"
#include "opml/features.hpp"
#include "opml/loss.hpp"
#include "opml/manifold.hpp"

namespace opml {

struct TrainConfig {
  double alpha_degrees = 45.0;
  Index embedding_dim = 128;        // clipped to d - 1 when d <= embedding_dim
  std::optional<int> rcgd_maxiter;  // unset: 30 full-batch, 10 per mini-batch
  double rcgd_tol = 1e-6;
  Index batch_size = 120;
  int epochs = 3;
  std::uint64_t seed = 0;
  Index per_anchor = 1;
  bool stochastic = true;  // which driver the CLI runs
  bool recluster = false;  // re-run AAS on the current embedding every epoch
  bool normalize = false;  // l2-normalize features before training
  AASConfig aas;

  /// Checks ranges; throws ConfigError.
  void validate() const;
  /// Embedding size actually used for a d-dimensional input.
  Index resolved_dim(Index d) const;
  int resolved_maxiter(bool stochastic_run) const;
};

struct TrainTraceEntry {
  int epoch = 0;  // 0 for full-batch training
  int batch = 0;
  TraceEntry step;
};

struct TrainedModel {
  MetricParams params;
  ClusterAssignment pseudo_labels;
  std::vector<TrainTraceEntry> trace;
  TrainConfig config;
  double max_feasibility_error = 0.0;
};

/// L = Q factor (positive diagonal) of a seeded standard-normal d x l matrix, R = L.
MetricParams init_params(Index d, Index l, std::uint64_t seed, double alpha_degrees = 45.0);

/// Pseudo-labels from AAS, or wraps user-supplied labels.
ClusterAssignment pseudo_labels_from(std::span<const int> labels);

/// Full-batch training: AAS pseudo-labels (unless given), semi-hard triplets
/// over the whole set under the initial L, then one RCGD run.
TrainedModel train_opml(const FeatureMatrix& X, const TrainConfig& cfg,
                        const std::optional<std::vector<int>>& labels = std::nullopt);

/// Mini-batch training: pseudo-labels once up front, then per batch
/// semi-hard mining under the current L and a warm-started RCGD run.
TrainedModel train_sopml(const FeatureMatrix& X, const TrainConfig& cfg,
                         const std::optional<std::vector<int>>& labels = std::nullopt);

/// Rows of X projected by L (n x l).
FeatureMatrix embed(const MetricParams& params, const FeatureMatrix& X);
inline FeatureMatrix embed(const TrainedModel& model, const FeatureMatrix& X) {
  return embed(model.params, X);
}

/// Header "d l alpha", then d rows of L, then d rows of R (comma-separated).
void save_model(std::ostream& os, const MetricParams& params);
MetricParams load_model(std::istream& is);

/// Flattened trace as "iter,objective,gradnorm,step" with a running iter.
void write_train_trace(std::ostream& os, const std::vector<TrainTraceEntry>& trace);

/// key=value configuration; '#' starts a comment, unknown keys are errors.
TrainConfig parse_config(std::istream& is);

}  // namespace opml
