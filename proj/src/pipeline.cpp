#include "opml/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "opml/diag.hpp"
#include "opml/error.hpp"
#include "opml/io.hpp"
#include "opml/mining.hpp"
#include "opml/rng.hpp"

namespace opml {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kMiningStream = 3;

int count_clusters(std::span<const int> labels) {
  std::set<int> ids;
  for (const int l : labels) {
    if (l != kNoise) ids.insert(l);
  }
  return static_cast<int>(ids.size());
}

ClusterAssignment obtain_labels(const FeatureMatrix& X, const TrainConfig& cfg,
                                const std::optional<std::vector<int>>& labels) {
  ClusterAssignment out;
  if (labels) {
    if (static_cast<Index>(labels->size()) != X.n()) {
      throw DimensionMismatch("training-pipeline", "pseudo-label count does not match example count");
    }
    out = pseudo_labels_from(*labels);
  } else {
    out = aas_cluster(X, cfg.aas);
  }
  if (out.n_clusters < 2) {
    std::ostringstream msg;
    msg << "pseudo-labels have " << out.n_clusters
        << " non-noise cluster(s); need at least 2 (AAS config gamma=" << cfg.aas.gamma
        << " epsilon=" << cfg.aas.epsilon << " theta_min=" << cfg.aas.theta_min
        << " k_graph=" << cfg.aas.k_graph << " c=" << cfg.aas.c << ")";
    throw PipelineError("training-pipeline", msg.str());
  }
  return out;
}

struct Problem {
  const FeatureMatrix& X;
  const TripletSet& T;
  double tan2a;

  LossFn loss() const {
    return [this](const ProductPoint& P) { return objective_value(P.R, P.L, tan2a, T, X); };
  }
  GradFn grad() const {
    return [this](const ProductPoint& P) { return euclid_grads(P.R, P.L, tan2a, T, X); };
  }
};

RcgdOptions rcgd_options(const TrainConfig& cfg, bool stochastic) {
  RcgdOptions o;
  o.maxiter = cfg.resolved_maxiter(stochastic);
  o.tol = cfg.rcgd_tol;
  return o;
}

FeatureMatrix prepare(const FeatureMatrix& X, const TrainConfig& cfg) {
  cfg.validate();
  if (X.n() < 2) throw EmptyDatasetError("training-pipeline", "need at least 2 examples");
  if (X.d() < 2) throw InvalidArgument("training-pipeline", "need d >= 2 for an embedding with l < d");
  return cfg.normalize ? l2_normalize(X) : X;
}

void check_feasible(const Matrix& L) {
  const double err = orthogonality_error(L);
  if (err > 1e-8) {
    throw FeasibilityError("training-pipeline", "||L^T L - I||_F = " + std::to_string(err));
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(alpha_degrees > 0.0 && alpha_degrees < 90.0)) {
    throw ConfigError("training-pipeline", "alpha_degrees must lie in (0, 90)");
  }
  if (embedding_dim < 1) throw ConfigError("training-pipeline", "embedding_dim must be positive");
  if (rcgd_maxiter && *rcgd_maxiter < 0) throw ConfigError("training-pipeline", "rcgd_maxiter must be >= 0");
  if (!(rcgd_tol >= 0.0)) throw ConfigError("training-pipeline", "rcgd_tol must be >= 0");
  if (batch_size < 4) throw ConfigError("training-pipeline", "batch_size must be at least 4");
  if (epochs < 1) throw ConfigError("training-pipeline", "epochs must be positive");
  if (per_anchor < 1) throw ConfigError("training-pipeline", "per_anchor must be positive");
  aas.validate();
}

Index TrainConfig::resolved_dim(Index d) const { return std::min(embedding_dim, d - 1); }

int TrainConfig::resolved_maxiter(bool stochastic_run) const {
  return rcgd_maxiter.value_or(stochastic_run ? 10 : 30);
}

MetricParams init_params(Index d, Index l, std::uint64_t seed, double alpha_degrees) {
  if (!(l >= 1 && l < d)) throw InvalidArgument("training-pipeline", "need 1 <= l < d");
  Rng rng = Rng::stream(seed, kInitStream);
  Matrix G(d, l);
  for (Index j = 0; j < l; ++j) {
    for (Index i = 0; i < d; ++i) G(i, j) = rng.normal();
  }
  Matrix L = qf(G);
  Matrix R = L;
  return MetricParams(std::move(L), std::move(R), alpha_degrees);
}

ClusterAssignment pseudo_labels_from(std::span<const int> labels) {
  ClusterAssignment out;
  out.labels.assign(labels.begin(), labels.end());
  for (const int l : labels) {
    if (l < kNoise) throw InvalidArgument("training-pipeline", "labels must be >= -1");
  }
  out.n_clusters = count_clusters(labels);
  return out;
}

TrainedModel train_opml(const FeatureMatrix& X_in, const TrainConfig& cfg,
                        const std::optional<std::vector<int>>& labels) {
  const FeatureMatrix X = prepare(X_in, cfg);
  ClusterAssignment pseudo = obtain_labels(X, cfg, labels);
  const Index l = cfg.resolved_dim(X.d());
  MetricParams params = init_params(X.d(), l, cfg.seed, cfg.alpha_degrees);

  Rng mining_rng = Rng::stream(cfg.seed, kMiningStream);
  MiningOptions mining{cfg.per_anchor};
  const TripletSet T = mine_semihard(X, pseudo.labels, params.L(), mining, mining_rng);
  if (T.empty()) throw PipelineError("training-pipeline", "no triplets could be mined from the pseudo-labels");

  const Problem problem{X, T, params.tan2a()};
  const RcgdResult run = rcgd(problem.loss(), problem.grad(), {params.R(), params.L()},
                              rcgd_options(cfg, false));
  check_feasible(run.point.L);

  TrainedModel model{MetricParams(run.point.L, run.point.R, cfg.alpha_degrees), std::move(pseudo), {}, cfg,
                     run.max_feasibility_error};
  for (const auto& e : run.trace) model.trace.push_back({0, 0, e});
  return model;
}

TrainedModel train_sopml(const FeatureMatrix& X_in, const TrainConfig& cfg,
                         const std::optional<std::vector<int>>& labels) {
  const FeatureMatrix X = prepare(X_in, cfg);
  ClusterAssignment pseudo = obtain_labels(X, cfg, labels);
  const Index l = cfg.resolved_dim(X.d());
  const MetricParams init = init_params(X.d(), l, cfg.seed, cfg.alpha_degrees);
  const double tan2a = init.tan2a();
  ProductPoint state{init.R(), init.L()};
  double max_feas = orthogonality_error(state.L);

  Rng shuffle_rng = Rng::stream(cfg.seed, kShuffleStream);
  Rng mining_rng = Rng::stream(cfg.seed, kMiningStream);
  const MiningOptions mining{cfg.per_anchor};
  const RcgdOptions options = rcgd_options(cfg, true);
  std::vector<TrainTraceEntry> trace;

  std::vector<Index> order(static_cast<std::size_t>(X.n()));
  for (Index i = 0; i < X.n(); ++i) order[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.recluster && epoch > 0 && !labels) {
      const MetricParams current(state.L, state.R, cfg.alpha_degrees);
      ClusterAssignment next = aas_cluster(embed(current, X), cfg.aas);
      if (next.n_clusters >= 2) {
        pseudo = std::move(next);
      } else {
        diag::warn("re-clustering produced fewer than 2 clusters; keeping previous pseudo-labels");
      }
    }
    shuffle_rng.shuffle(order.begin(), order.end());
    int used = 0;
    int batch_id = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size), ++batch_id) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      const std::span<const Index> batch(order.data() + start, stop - start);
      std::vector<int> batch_labels;
      for (const Index i : batch) batch_labels.push_back(pseudo.labels[static_cast<std::size_t>(i)]);
      if (count_clusters(batch_labels) < 2) continue;

      const TripletSet T = mine_semihard(X, pseudo.labels, state.L, mining, mining_rng, batch);
      if (T.empty()) continue;
      ++used;
      const Problem problem{X, T, tan2a};
      RcgdResult run = rcgd(problem.loss(), problem.grad(), state, options);
      check_feasible(run.point.L);
      max_feas = std::max(max_feas, run.max_feasibility_error);
      for (const auto& e : run.trace) trace.push_back({epoch, batch_id, e});
      state = std::move(run.point);
    }
    if (used == 0) {
      throw PipelineError("training-pipeline", "every mini-batch in epoch " + std::to_string(epoch) +
                                                   " yielded no triplets; labels too fragmented for batch_size " +
                                                   std::to_string(cfg.batch_size));
    }
  }
  return {MetricParams(state.L, state.R, cfg.alpha_degrees), std::move(pseudo), std::move(trace), cfg, max_feas};
}

FeatureMatrix embed(const MetricParams& params, const FeatureMatrix& X) {
  if (X.d() != params.d()) {
    throw DimensionMismatch("training-pipeline", "input has " + std::to_string(X.d()) +
                                                     " columns, model expects " + std::to_string(params.d()));
  }
  return FeatureMatrix(X.data() * params.L());
}

void save_model(std::ostream& os, const MetricParams& params) {
  os << params.d() << ' ' << params.l() << ' ' << io::format_double(params.alpha_degrees()) << '\n';
  for (const Matrix* M : {&params.L(), &params.R()}) {
    for (Index i = 0; i < M->rows(); ++i) {
      for (Index j = 0; j < M->cols(); ++j) {
        if (j > 0) os << ',';
        os << io::format_double((*M)(i, j));
      }
      os << '\n';
    }
  }
}

MetricParams load_model(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("cli-io", "model file is empty");
  std::istringstream hs(header);
  Index d = 0;
  Index l = 0;
  double alpha = 0.0;
  if (!(hs >> d >> l >> alpha) || d < 2 || l < 1) {
    throw ParseError("cli-io", "model header must be 'd l alpha'");
  }
  const io::Dataset body = io::read_csv(is, false);
  if (body.X.n() != 2 * d || body.X.d() != l) {
    throw ParseError("cli-io", "model body must hold 2*d rows of l values");
  }
  Matrix L = body.X.data().topRows(d);
  Matrix R = body.X.data().bottomRows(d);
  return MetricParams(std::move(L), std::move(R), alpha);
}

void write_train_trace(std::ostream& os, const std::vector<TrainTraceEntry>& trace) {
  std::vector<TraceEntry> flat;
  flat.reserve(trace.size());
  int iter = 0;
  for (const auto& e : trace) {
    TraceEntry t = e.step;
    t.iter = iter++;
    flat.push_back(t);
  }
  write_trace(os, flat);
}

}  // namespace opml
