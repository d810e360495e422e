#include "opml/manifold.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "opml/error.hpp"

namespace opml {

double inner(const ProductTangent& a, const ProductTangent& b) {
  return (a.R_dir.array() * b.R_dir.array()).sum() + (a.L_dir.array() * b.L_dir.array()).sum();
}

double norm(const ProductTangent& a) { return std::sqrt(inner(a, a)); }

namespace {

Matrix horizontal(const Matrix& L, const Matrix& V) { return V - L * (L.transpose() * V); }

}  // namespace

ProductTangent project_tangent(const ProductPoint& P, const EuclideanGradient& G) {
  return {G.G_R, horizontal(P.L, G.G_L)};
}

Matrix qf(const Matrix& A) {
  const Index rows = A.rows();
  const Index cols = A.cols();
  const Eigen::HouseholderQR<Matrix> qr(A);
  Matrix Q = qr.householderQ() * Matrix::Identity(rows, cols);
  const auto diag = qr.matrixQR().diagonal();
  const double scale = std::max(A.norm(), 1.0);
  for (Index j = 0; j < cols; ++j) {
    if (!(std::abs(diag(j)) > 1e-12 * scale)) {
      throw RetractionError("manifold-optim", "rank-deficient matrix in QR retraction");
    }
    if (diag(j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

ProductPoint retract(const ProductPoint& P, const ProductTangent& xi, double step) {
  if (step == 0.0) return P;
  return {P.R + step * xi.R_dir, qf(P.L + step * xi.L_dir)};
}

ProductTangent transport(const ProductPoint& P_new, const ProductTangent& xi) {
  return {xi.R_dir, horizontal(P_new.L, xi.L_dir)};
}

RcgdResult rcgd(const LossFn& loss, const GradFn& grad, const ProductPoint& init,
                const RcgdOptions& options) {
  RcgdResult result;
  result.point = init;
  result.max_feasibility_error = orthogonality_error(init.L);

  double value = loss(result.point);
  ProductTangent g = project_tangent(result.point, grad(result.point));
  double gnorm = norm(g);
  result.trace.push_back({0, value, gnorm, 0.0});
  if (options.maxiter <= 0) return result;

  const Index reset_period = std::max<Index>(1, init.L.rows() * init.L.cols());
  ProductTangent eta = -g;
  Index since_reset = 0;

  for (int iter = 1; iter <= options.maxiter; ++iter) {
    if (gnorm <= options.tol) {
      result.status = RcgdStatus::GradientTolerance;
      return result;
    }
    double slope = inner(g, eta);
    if (slope >= 0.0) {
      eta = -g;
      slope = -gnorm * gnorm;
      since_reset = 0;
    }

    double step = options.initial_step;
    bool accepted = false;
    ProductPoint candidate;
    double candidate_value = 0.0;
    for (int h = 0; h <= options.max_halvings; ++h) {
      try {
        candidate = retract(result.point, eta, step);
        candidate_value = loss(candidate);
        if (std::isfinite(candidate_value) &&
            candidate_value <= value + options.sufficient_decrease * step * slope) {
          accepted = true;
          break;
        }
      } catch (const RetractionError&) {
        // shrink and retry
      }
      step *= options.contraction;
    }
    if (!accepted) {
      result.status = RcgdStatus::LineSearchFailure;
      return result;
    }

    const double feas = orthogonality_error(candidate.L);
    result.max_feasibility_error = std::max(result.max_feasibility_error, feas);
    if (feas > options.feasibility_tol) {
      throw FeasibilityError("manifold-optim",
                             "orthogonality violated after accepted step: " + std::to_string(feas));
    }

    const ProductTangent g_new = project_tangent(candidate, grad(candidate));
    const ProductTangent g_old = transport(candidate, g);
    const ProductTangent eta_old = transport(candidate, eta);
    const double old_sq = gnorm * gnorm;
    double beta = 0.0;
    if (old_sq > 0.0) {
      ProductTangent diff{g_new.R_dir - g_old.R_dir, g_new.L_dir - g_old.L_dir};
      beta = std::max(0.0, inner(g_new, diff) / old_sq);
    }
    ++since_reset;
    if (since_reset >= reset_period) {
      beta = 0.0;
      since_reset = 0;
    }
    eta = {-g_new.R_dir + beta * eta_old.R_dir, -g_new.L_dir + beta * eta_old.L_dir};
    if (beta == 0.0) since_reset = 0;

    result.point = std::move(candidate);
    value = candidate_value;
    g = g_new;
    gnorm = norm(g);
    result.trace.push_back({iter, value, gnorm, step});
  }
  result.status = gnorm <= options.tol ? RcgdStatus::GradientTolerance : RcgdStatus::MaxIterations;
  return result;
}

void write_trace(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "iter,objective,gradnorm,step\n";
  char buf[128];
  for (const auto& e : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", e.iter, e.objective, e.grad_norm, e.step);
    os << buf;
  }
}

}  // namespace opml
