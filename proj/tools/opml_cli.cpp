// Command-line front end: gen, cluster, train, embed, eval.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opml/aas.hpp"
#include "opml/error.hpp"
#include "opml/evaluation.hpp"
#include "opml/io.hpp"
#include "opml/parallel.hpp"
#include "opml/pipeline.hpp"
#include "opml/synthetic.hpp"

namespace {

using namespace opml;

struct Options {
  std::string input;
  std::string labels;
  std::string config;
  std::string out;
  std::string model;
  std::string trace;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::vector<int> ks;
  bool labeled = false;
  int extra_dims = 0;
  double nuisance_sigma = 1.0;
};

TrainConfig load_config(const Options& o) {
  TrainConfig cfg;
  if (!o.config.empty()) {
    auto is = io::open_input(o.config);
    cfg = parse_config(is);
  }
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

/// CSV if any line has a comma or a non-integer value; labels files have neither.
bool looks_like_csv(const std::string& path) {
  auto is = io::open_input(path);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of("+-0123456789 \t\r") != std::string::npos) return true;
  }
  return false;
}

/// Labels from a one-per-line file or the last column of a labeled CSV.
std::vector<int> load_any_labels(const std::string& path) {
  if (looks_like_csv(path)) return io::read_csv(path, true).labels;
  return io::read_labels(path);
}

int cmd_gen(const Options& o) {
  const std::uint64_t seed = o.seed.value_or(0);
  const SyntheticSet s = o.extra_dims > 0 ? gen_synthetic_lifted(seed, o.extra_dims, o.nuisance_sigma)
                                          : gen_synthetic(seed);
  io::write_csv(o.out, s.X.data(), &s.labels);
  return 0;
}

int cmd_cluster(const Options& o) {
  const TrainConfig cfg = load_config(o);
  const io::Dataset data = io::read_csv(o.input, o.labeled);
  const ClusterAssignment a = aas_cluster(data.X, cfg.aas);
  io::write_labels(o.out, a.labels);
  std::cerr << "clusters " << a.n_clusters << '\n';
  return 0;
}

int cmd_train(const Options& o) {
  const TrainConfig cfg = load_config(o);
  const io::Dataset data = io::read_csv(o.input, o.labeled);
  std::optional<std::vector<int>> pseudo;
  if (!o.labels.empty()) pseudo = load_any_labels(o.labels);
  const TrainedModel model = cfg.stochastic ? train_sopml(data.X, cfg, pseudo) : train_opml(data.X, cfg, pseudo);
  {
    auto os = io::open_output(o.out);
    save_model(os, model.params);
  }
  if (!o.trace.empty()) {
    auto os = io::open_output(o.trace);
    write_train_trace(os, model.trace);
  }
  return 0;
}

int cmd_embed(const Options& o) {
  std::ifstream is = io::open_input(o.model);
  const MetricParams params = load_model(is);
  const io::Dataset data = io::read_csv(o.input, o.labeled);
  const FeatureMatrix E = embed(params, data.X);
  io::write_csv(o.out, E.data(), o.labeled ? &data.labels : nullptr);
  return 0;
}

/// Drops rows whose ground truth is noise; those are not a class.
std::vector<Index> scored_rows(const std::vector<int>& truth) {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != kNoise) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

int cmd_eval(const Options& o) {
  std::vector<int> truth;
  const bool embeddings = looks_like_csv(o.input);
  io::Dataset emb;
  std::vector<int> pred;
  if (embeddings) {
    emb = io::read_csv(o.input, o.labeled);
    if (o.labeled) truth = emb.labels;
  } else {
    pred = io::read_labels(o.input);
  }
  if (!o.labels.empty()) truth = load_any_labels(o.labels);
  if (truth.empty()) throw InvalidArgument("cli-io", "no ground-truth labels given (--labels or --labeled)");

  const std::vector<Index> rows = scored_rows(truth);
  std::vector<int> t;
  for (const Index r : rows) t.push_back(truth[static_cast<std::size_t>(r)]);

  EvalReport report;
  if (embeddings) {
    if (static_cast<std::size_t>(emb.X.n()) != truth.size()) {
      throw DimensionMismatch("evaluation", "embedding rows and truth labels differ in count");
    }
    const FeatureMatrix E = emb.X.select_rows(rows);
    const std::vector<int> ks = o.ks.empty() ? std::vector<int>{1, 2, 4, 8} : o.ks;
    report.recall_at_k = recall_at_k(E, t, ks);
    const int classes = static_cast<int>(std::set<int>(t.begin(), t.end()).size());
    const KMeansResult km = kmeans_best_of(E, classes, o.seed.value_or(0), 10);
    const EvalReport c = evaluate_clustering(km.labels, t);
    report.nmi = c.nmi;
    report.f_measure = c.f_measure;
    report.precision = c.precision;
    report.recall = c.recall;
  } else {
    if (pred.size() != truth.size()) throw DimensionMismatch("evaluation", "prediction and truth lengths differ");
    std::vector<int> p;
    for (const Index r : rows) p.push_back(pred[static_cast<std::size_t>(r)]);
    report = evaluate_clustering(p, t);
  }
  if (o.out.empty()) {
    write_report(std::cout, report);
  } else {
    auto os = io::open_output(o.out);
    write_report(os, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised orthogonal metric learning with authority-ascent pseudo-labels"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "OpenMP threads (1 = reproducible baseline)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed for every random draw");
  };

  auto* gen = app.add_subcommand("gen", "Write the crescents + Gaussians synthetic set (x,y,...,label)");
  gen->add_option("--out", o.out, "Output CSV")->required();
  gen->add_option("--extra-dims", o.extra_dims, "Append Gaussian nuisance dimensions")->check(CLI::NonNegativeNumber);
  gen->add_option("--nuisance-sigma", o.nuisance_sigma, "Std. dev. of the nuisance dimensions");
  add_common(gen);

  auto* cluster = app.add_subcommand("cluster", "AAS pseudo-labels, one integer per line (-1 = noise)");
  cluster->add_option("--input", o.input, "Feature CSV")->required();
  cluster->add_option("--config", o.config, "key=value config file");
  cluster->add_option("--out", o.out, "Labels file")->required();
  cluster->add_flag("--labeled", o.labeled, "Input CSV has a trailing label column (ignored)");
  add_common(cluster);

  auto* train = app.add_subcommand("train", "Learn (R, L) and write the model file");
  train->add_option("--input", o.input, "Feature CSV")->required();
  train->add_option("--config", o.config, "key=value config file");
  train->add_option("--labels", o.labels, "Precomputed pseudo-labels (skips AAS)");
  train->add_option("--out", o.out, "Model file")->required();
  train->add_option("--trace", o.trace, "Optimization trace CSV");
  train->add_flag("--labeled", o.labeled, "Input CSV has a trailing label column (ignored)");
  add_common(train);

  auto* emb = app.add_subcommand("embed", "Project features with a trained model");
  emb->add_option("--model", o.model, "Model file")->required();
  emb->add_option("--input", o.input, "Feature CSV")->required();
  emb->add_option("--out", o.out, "Embedding CSV")->required();
  emb->add_flag("--labeled", o.labeled, "Input CSV has a trailing label column (kept in the output)");
  add_common(emb);

  auto* eval = app.add_subcommand("eval", "Clustering metrics for a labels file, or Recall@K for embeddings");
  eval->add_option("--input", o.input, "Predicted labels file or embedding CSV")->required();
  eval->add_option("--labels", o.labels, "Ground-truth labels (labels file or labeled CSV)");
  eval->add_option("--k", o.ks, "Recall@K cutoff (repeatable)");
  eval->add_option("--out", o.out, "Write the report here instead of stdout");
  eval->add_flag("--labeled", o.labeled, "Embedding CSV carries the ground truth in its last column");
  add_common(eval);

  CLI11_PARSE(app, argc, argv);
  parallel::set_threads(o.threads);

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (cluster->parsed()) return cmd_cluster(o);
    if (train->parsed()) return cmd_train(o);
    if (emb->parsed()) return cmd_embed(o);
    if (eval->parsed()) return cmd_eval(o);
  } catch (const opml::Error& e) {
    std::cerr << "error [" << e.module() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
