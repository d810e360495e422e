#include <algorithm>
#include <limits>
#include <utility>

#include "opml/kernels.hpp"
#include "opml/scalar.hpp"

namespace opml::kernels::serial {

KnnRows knn_rows(const RowMatrix& X, Index k) {
  const Index n = X.rows();
  const Index d = X.cols();
  KnnRows out;
  out.n = n;
  out.k = k;
  out.neighbors.resize(static_cast<std::size_t>(n * k));
  out.sq_dist.resize(static_cast<std::size_t>(n * k));

  std::vector<std::pair<double, Index>> row;
  row.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    row.clear();
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (Index c = 0; c < d; ++c) {
        const double diff = X(i, c) - X(j, c);
        s += diff * diff;
      }
      row.emplace_back(s, j);
      out.max_sq_dist = std::max(out.max_sq_dist, s);
    }
    std::sort(row.begin(), row.end());
    for (Index r = 0; r < k; ++r) {
      out.neighbors[static_cast<std::size_t>(i * k + r)] = row[static_cast<std::size_t>(r)].second;
      out.sq_dist[static_cast<std::size_t>(i * k + r)] = row[static_cast<std::size_t>(r)].first;
    }
  }
  return out;
}

void gather(const InEdges& in, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<Index>(y.size());
  for (Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Index e = in.offsets[j]; e < in.offsets[j + 1]; ++e) s += x[in.sources[e]] * in.probs[e];
    y[j] = s;
  }
}

void triplet_terms(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Weighting weighting, LossBreakdown& out) {
  const std::size_t m = T.size();
  out.z.assign(m, 0.0);
  out.m.assign(m, 0.0);
  out.w_plus.assign(m, 0.0);
  out.w_minus.assign(m, 0.0);
  out.w.assign(m, 0.0);
  out.f.assign(m, 0.0);
  out.p.assign(m, 0.0);
  out.total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vector a = X.row(T[i].anchor).transpose();
    const Vector p = X.row(T[i].positive).transpose();
    const Vector n = X.row(T[i].negative).transpose();
    const Vector avg = 0.5 * (a + p);
    const double dap = (L.transpose() * (a - p)).squaredNorm();
    const double dna = (L.transpose() * (n - avg)).squaredNorm();
    out.z[i] = dap - tan2a * dna;
    out.m[i] = softplus(out.z[i]);
    if (weighting == Weighting::Learned) {
      out.w_plus[i] = sigmoid(a.dot(R * (R.transpose() * p)));
      out.w_minus[i] = 1.0 - sigmoid(avg.dot(R * (R.transpose() * n)));
    } else {
      out.w_plus[i] = 1.0;
      out.w_minus[i] = 1.0;
    }
    out.w[i] = 0.5 * (out.w_plus[i] + out.w_minus[i]);
    out.f[i] = out.w[i] * out.m[i];
    out.p[i] = sigmoid(-out.f[i]);
    out.total += softplus(out.f[i]);
  }
}

void loss_gradient(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Matrix& G_R, Matrix& G_L) {
  G_R = Matrix::Zero(R.rows(), R.cols());
  G_L = Matrix::Zero(L.rows(), L.cols());
  for (const Triplet& t : T) {
    const Vector a = X.row(t.anchor).transpose();
    const Vector p = X.row(t.positive).transpose();
    const Vector n = X.row(t.negative).transpose();
    const Vector avg = 0.5 * (a + p);
    const Vector u = a - p;
    const Vector v = n - avg;
    const double z = (L.transpose() * u).squaredNorm() - tan2a * (L.transpose() * v).squaredNorm();
    const double m = softplus(z);
    const double s_plus = a.dot(R * (R.transpose() * p));
    const double s_minus = avg.dot(R * (R.transpose() * n));
    const double w = 0.5 * (sigmoid(s_plus) + 1.0 - sigmoid(s_minus));
    const double df = sigmoid(w * m);

    // d total / d L through z.
    const Matrix dz_dL = 2.0 * (u * u.transpose() - tan2a * v * v.transpose()) * L;
    G_L += df * w * sigmoid(z) * dz_dL;

    // d total / d R through w.
    const Matrix ds_plus = (a * p.transpose() + p * a.transpose()) * R;
    const Matrix ds_minus = (avg * n.transpose() + n * avg.transpose()) * R;
    G_R += df * m * 0.5 *
           (sigmoid_derivative(s_plus) * ds_plus - sigmoid_derivative(s_minus) * ds_minus);
  }
}

std::vector<Index> semihard_negatives(const RowMatrix& E, const MiningQuery& q) {
  std::vector<Index> out(q.anchors.size(), -1);
  for (std::size_t k = 0; k < q.anchors.size(); ++k) {
    const Index a = q.anchors[k];
    const int label = q.labels[a];
    const double dap = (E.row(a) - E.row(q.positives[k])).squaredNorm();
    double best_semi = std::numeric_limits<double>::infinity();
    double best_hard = std::numeric_limits<double>::infinity();
    Index semi = -1;
    Index hard = -1;
    for (const Index c : q.candidates) {
      const int lc = q.labels[c];
      if (lc == label || lc == kNoise) continue;
      const double dan = (E.row(a) - E.row(c)).squaredNorm();
      if (dan > dap && dan < best_semi) {
        best_semi = dan;
        semi = c;
      }
      if (dan < best_hard) {
        best_hard = dan;
        hard = c;
      }
    }
    out[k] = semi >= 0 ? semi : hard;
  }
  return out;
}

}  // namespace opml::kernels::serial
