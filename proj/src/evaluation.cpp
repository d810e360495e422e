#include "opml/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "opml/diag.hpp"
#include "opml/error.hpp"
#include "opml/rng.hpp"

namespace opml {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch("evaluation", "prediction and truth lengths differ");
}

/// Dense contingency table between two labelings.
struct Contingency {
  std::vector<std::vector<double>> counts;
  std::vector<double> rows;
  std::vector<double> cols;
  double n = 0.0;
};

std::vector<int> dense_ids(std::span<const int> labels, int& count) {
  std::map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, inserted] = ids.try_emplace(labels[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  count = static_cast<int>(ids.size());
  return out;
}

Contingency contingency(std::span<const int> a, std::span<const int> b) {
  int ka = 0;
  int kb = 0;
  const auto ia = dense_ids(a, ka);
  const auto ib = dense_ids(b, kb);
  Contingency c;
  c.counts.assign(static_cast<std::size_t>(ka), std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  c.rows.assign(static_cast<std::size_t>(ka), 0.0);
  c.cols.assign(static_cast<std::size_t>(kb), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.counts[static_cast<std::size_t>(ia[i])][static_cast<std::size_t>(ib[i])] += 1.0;
    c.rows[static_cast<std::size_t>(ia[i])] += 1.0;
    c.cols[static_cast<std::size_t>(ib[i])] += 1.0;
  }
  c.n = static_cast<double>(a.size());
  return c;
}

double entropy(const std::vector<double>& sizes, double n) {
  double h = 0.0;
  for (const double s : sizes) {
    if (s > 0.0) h -= s / n * std::log(s / n);
  }
  return h;
}

double pairs(double s) { return s * (s - 1.0) / 2.0; }

}  // namespace

std::vector<int> expand_noise(std::span<const int> labels) {
  int next = 0;
  for (const int l : labels) next = std::max(next, l + 1);
  std::vector<int> out(labels.begin(), labels.end());
  for (int& l : out) {
    if (l == kNoise) l = next++;
  }
  return out;
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred.size(), truth.size());
  if (pred.empty()) throw InvalidArgument("evaluation", "cannot score an empty labeling");
  const std::vector<int> p = expand_noise(pred);
  const Contingency c = contingency(p, truth);
  const double hp = entropy(c.rows, c.n);
  const double ht = entropy(c.cols, c.n);
  if (c.rows.size() == 1 && c.cols.size() == 1) return 1.0;
  if (hp == 0.0 || ht == 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    for (std::size_t j = 0; j < c.cols.size(); ++j) {
      const double nij = c.counts[i][j];
      if (nij > 0.0) mi += nij / c.n * std::log(nij * c.n / (c.rows[i] * c.cols[j]));
    }
  }
  return std::clamp(mi / (0.5 * (hp + ht)), 0.0, 1.0);
}

PairwiseScores pairwise_prf(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred.size(), truth.size());
  const std::vector<int> p = expand_noise(pred);
  const Contingency c = contingency(p, truth);
  double tp = 0.0;
  for (const auto& row : c.counts) {
    for (const double nij : row) tp += pairs(nij);
  }
  double same_pred = 0.0;
  for (const double s : c.rows) same_pred += pairs(s);
  double same_truth = 0.0;
  for (const double s : c.cols) same_truth += pairs(s);
  PairwiseScores out;
  out.precision = same_pred > 0.0 ? tp / same_pred : 0.0;
  out.recall = same_truth > 0.0 ? tp / same_truth : 0.0;
  const double denom = out.precision + out.recall;
  out.f_measure = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

std::map<int, double> recall_at_k(const FeatureMatrix& E, std::span<const int> truth,
                                  const std::vector<int>& Ks) {
  const Index n = E.n();
  check_lengths(static_cast<std::size_t>(n), truth.size());
  if (n < 2) throw InvalidArgument("evaluation", "Recall@K needs at least 2 examples");
  std::vector<int> ks;
  for (const int k : Ks) {
    if (k < 1) throw InvalidArgument("evaluation", "K must be positive");
    if (k > n - 1) diag::warn("K = " + std::to_string(k) + " clipped to n-1 = " + std::to_string(n - 1));
    ks.push_back(static_cast<int>(std::min<Index>(k, n - 1)));
  }
  const int kmax = ks.empty() ? 1 : *std::max_element(ks.begin(), ks.end());

  // Rank of the first same-label neighbor for every query (kmax + 1 if none).
  std::vector<int> first_hit(static_cast<std::size_t>(n));
  const RowMatrix& X = E.data();
#pragma omp parallel
  {
    std::vector<std::pair<double, Index>> row;
    row.reserve(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (Index i = 0; i < n; ++i) {
      row.clear();
      for (Index j = 0; j < n; ++j) {
        if (j != i) row.emplace_back((X.row(i) - X.row(j)).squaredNorm(), j);
      }
      std::partial_sort(row.begin(), row.begin() + kmax, row.end());
      int hit = kmax + 1;
      for (int r = 0; r < kmax; ++r) {
        if (truth[static_cast<std::size_t>(row[static_cast<std::size_t>(r)].second)] ==
            truth[static_cast<std::size_t>(i)]) {
          hit = r + 1;
          break;
        }
      }
      first_hit[static_cast<std::size_t>(i)] = hit;
    }
  }
  std::map<int, double> out;
  for (std::size_t q = 0; q < ks.size(); ++q) {
    Index hits = 0;
    for (const int h : first_hit) hits += h <= ks[q] ? 1 : 0;
    out[Ks[q]] = 100.0 * static_cast<double>(hits) / static_cast<double>(n);
  }
  return out;
}

KMeansResult kmeans(const FeatureMatrix& X, int k, std::uint64_t seed, int max_iters) {
  const Index n = X.n();
  if (k < 1) throw InvalidArgument("evaluation", "k must be positive");
  if (k > n) throw InvalidArgument("evaluation", "k exceeds the number of examples");
  const RowMatrix& data = X.data();
  Rng rng(seed);

  // k-means++ seeding.
  KMeansResult out;
  out.centroids.resize(k, X.d());
  out.centroids.row(0) = data.row(static_cast<Index>(rng.index(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) d2[i] = (data.row(i) - out.centroids.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (const double v : d2) total += v;
    Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    }
    out.centroids.row(c) = data.row(pick);
    for (Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], (data.row(i) - out.centroids.row(c)).squaredNorm());
  }

  out.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dc = (data.row(i) - out.centroids.row(c)).squaredNorm();
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      dist[i] = best_d;
      if (out.labels[i] != best) {
        out.labels[i] = best;
        changed = true;
      }
    }
    out.iterations = iter + 1;
    if (!changed && iter > 0) break;

    Matrix sums = Matrix::Zero(k, X.d());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(out.labels[i]) += data.row(i);
      ++counts[static_cast<std::size_t>(out.labels[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        out.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Re-seed an empty cluster at the point farthest from its centroid.
        const auto far = std::max_element(dist.begin(), dist.end()) - dist.begin();
        out.centroids.row(c) = data.row(far);
        dist[static_cast<std::size_t>(far)] = 0.0;
        out.labels[static_cast<std::size_t>(far)] = c;
      }
    }
  }
  out.inertia = 0.0;
  for (Index i = 0; i < n; ++i) out.inertia += (data.row(i) - out.centroids.row(out.labels[i])).squaredNorm();
  return out;
}

KMeansResult kmeans_best_of(const FeatureMatrix& X, int k, std::uint64_t seed, int restarts) {
  if (restarts < 1) throw InvalidArgument("evaluation", "restarts must be positive");
  KMeansResult best = kmeans(X, k, seed);
  for (int r = 1; r < restarts; ++r) {
    KMeansResult cand = kmeans(X, k, seed + static_cast<std::uint64_t>(r));
    if (cand.inertia < best.inertia) best = std::move(cand);
  }
  return best;
}

EvalReport evaluate_clustering(std::span<const int> pred, std::span<const int> truth) {
  EvalReport r;
  r.nmi = nmi(pred, truth);
  const PairwiseScores s = pairwise_prf(pred, truth);
  r.precision = s.precision;
  r.recall = s.recall;
  r.f_measure = s.f_measure;
  return r;
}

void write_report(std::ostream& os, const EvalReport& report, bool include_clustering) {
  char buf[128];
  auto line = [&](const std::string& name, double v) {
    std::snprintf(buf, sizeof buf, "%s %.17g\n", name.c_str(), v);
    os << buf;
  };
  if (include_clustering) {
    line("nmi", report.nmi);
    line("f_measure", report.f_measure);
    line("precision", report.precision);
    line("recall", report.recall);
  }
  for (const auto& [k, v] : report.recall_at_k) line("recall_at_" + std::to_string(k), v);
}

}  // namespace opml
