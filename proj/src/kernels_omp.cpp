#include <algorithm>
#include <limits>
#include <utility>

#include "opml/kernels.hpp"
#include "opml/scalar.hpp"

namespace opml::kernels::omp {

KnnRows knn_rows(const RowMatrix& X, Index k) {
  const Index n = X.rows();
  const Index d = X.cols();
  KnnRows out;
  out.n = n;
  out.k = k;
  out.neighbors.resize(static_cast<std::size_t>(n * k));
  out.sq_dist.resize(static_cast<std::size_t>(n * k));
  std::vector<double> row_max(static_cast<std::size_t>(n), 0.0);

#pragma omp parallel
  {
    std::vector<std::pair<double, Index>> row;
    row.reserve(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (Index i = 0; i < n; ++i) {
      row.clear();
      const double* xi = X.row(i).data();
      double local_max = 0.0;
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double* xj = X.row(j).data();
        double s = 0.0;
        for (Index c = 0; c < d; ++c) {
          const double diff = xi[c] - xj[c];
          s += diff * diff;
        }
        row.emplace_back(s, j);
        local_max = std::max(local_max, s);
      }
      std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
      std::sort(row.begin(), row.begin() + k);
      for (Index r = 0; r < k; ++r) {
        out.neighbors[static_cast<std::size_t>(i * k + r)] = row[static_cast<std::size_t>(r)].second;
        out.sq_dist[static_cast<std::size_t>(i * k + r)] = row[static_cast<std::size_t>(r)].first;
      }
      row_max[static_cast<std::size_t>(i)] = local_max;
    }
  }
  for (const double m : row_max) out.max_sq_dist = std::max(out.max_sq_dist, m);
  return out;
}

void gather(const InEdges& in, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<Index>(y.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Index e = in.offsets[j]; e < in.offsets[j + 1]; ++e) s += x[in.sources[e]] * in.probs[e];
    y[j] = s;
  }
}

void triplet_terms(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Weighting weighting, LossBreakdown& out) {
  const auto m = static_cast<Index>(T.size());
  for (auto* v : {&out.z, &out.m, &out.w_plus, &out.w_minus, &out.w, &out.f, &out.p})
    v->assign(static_cast<std::size_t>(m), 0.0);

#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) {
    const auto& t = T[static_cast<std::size_t>(i)];
    const auto a = X.row(t.anchor);
    const auto p = X.row(t.positive);
    const auto n = X.row(t.negative);
    const Eigen::RowVectorXd avg = 0.5 * (a + p);
    const double dap = ((a - p) * L).squaredNorm();
    const double dna = ((n - avg) * L).squaredNorm();
    const auto k = static_cast<std::size_t>(i);
    out.z[k] = dap - tan2a * dna;
    out.m[k] = softplus(out.z[k]);
    if (weighting == Weighting::Learned) {
      out.w_plus[k] = sigmoid((a * R).dot(p * R));
      out.w_minus[k] = 1.0 - sigmoid((avg * R).dot(n * R));
    } else {
      out.w_plus[k] = 1.0;
      out.w_minus[k] = 1.0;
    }
    out.w[k] = 0.5 * (out.w_plus[k] + out.w_minus[k]);
    out.f[k] = out.w[k] * out.m[k];
    out.p[k] = sigmoid(-out.f[k]);
  }
  out.total = 0.0;
  for (const double f : out.f) out.total += softplus(f);
}

void loss_gradient(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Matrix& G_R, Matrix& G_L) {
  const auto m = static_cast<Index>(T.size());
  const Index d = X.cols();
  const Index l = L.cols();

  // Per-triplet projections and chain-rule coefficients.
  RowMatrix uL(m, l), vL(m, l), Ra(m, l), Rp(m, l), Ravg(m, l), Rn(m, l);
  std::vector<double> coef_L(static_cast<std::size_t>(m));
  std::vector<double> coef_plus(static_cast<std::size_t>(m));
  std::vector<double> coef_minus(static_cast<std::size_t>(m));

#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) {
    const auto& t = T[static_cast<std::size_t>(i)];
    const auto a = X.row(t.anchor);
    const auto p = X.row(t.positive);
    const auto n = X.row(t.negative);
    const Eigen::RowVectorXd avg = 0.5 * (a + p);
    uL.row(i) = (a - p) * L;
    vL.row(i) = (n - avg) * L;
    Ra.row(i) = a * R;
    Rp.row(i) = p * R;
    Ravg.row(i) = avg * R;
    Rn.row(i) = n * R;
    const double z = uL.row(i).squaredNorm() - tan2a * vL.row(i).squaredNorm();
    const double sm = softplus(z);
    const double s_plus = Ra.row(i).dot(Rp.row(i));
    const double s_minus = Ravg.row(i).dot(Rn.row(i));
    const double w = 0.5 * (sigmoid(s_plus) + 1.0 - sigmoid(s_minus));
    const double df = sigmoid(w * sm);
    const auto k = static_cast<std::size_t>(i);
    coef_L[k] = 2.0 * df * w * sigmoid(z);
    coef_plus[k] = 0.5 * df * sm * sigmoid_derivative(s_plus);
    coef_minus[k] = -0.5 * df * sm * sigmoid_derivative(s_minus);
  }

  G_R.setZero(d, l);
  G_L.setZero(d, l);
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < d; ++r) {
    Eigen::RowVectorXd gl = Eigen::RowVectorXd::Zero(l);
    Eigen::RowVectorXd gr = Eigen::RowVectorXd::Zero(l);
    for (Index i = 0; i < m; ++i) {
      const auto& t = T[static_cast<std::size_t>(i)];
      const auto k = static_cast<std::size_t>(i);
      const double ar = X(t.anchor, r);
      const double pr = X(t.positive, r);
      const double nr = X(t.negative, r);
      const double avgr = 0.5 * (ar + pr);
      gl += coef_L[k] * ((ar - pr) * uL.row(i) - tan2a * (nr - avgr) * vL.row(i));
      gr += coef_plus[k] * (ar * Rp.row(i) + pr * Ra.row(i)) +
            coef_minus[k] * (avgr * Rn.row(i) + nr * Ravg.row(i));
    }
    G_L.row(r) = gl;
    G_R.row(r) = gr;
  }
}

std::vector<Index> semihard_negatives(const RowMatrix& E, const MiningQuery& q) {
  const auto m = static_cast<Index>(q.anchors.size());
  std::vector<Index> out(q.anchors.size(), -1);
#pragma omp parallel for schedule(dynamic, 16)
  for (Index k = 0; k < m; ++k) {
    const Index a = q.anchors[static_cast<std::size_t>(k)];
    const int label = q.labels[a];
    const double dap = (E.row(a) - E.row(q.positives[static_cast<std::size_t>(k)])).squaredNorm();
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
    out[static_cast<std::size_t>(k)] = semi >= 0 ? semi : hard;
  }
  return out;
}

}  // namespace opml::kernels::omp
