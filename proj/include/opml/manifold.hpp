#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "opml/loss.hpp"
#include "opml/types.hpp"

namespace opml {

/// Point on R^{d x l} x Grassmann(d, l); L is an orthonormal representative.
struct ProductPoint {
  Matrix R;
  Matrix L;
};

/// Tangent vector: R_dir is unconstrained, L_dir is horizontal (L^T L_dir = 0).
struct ProductTangent {
  Matrix R_dir;
  Matrix L_dir;

  ProductTangent operator-() const { return {-R_dir, -L_dir}; }
};

/// Product metric: sum of the Frobenius inner products of both factors.
double inner(const ProductTangent& a, const ProductTangent& b);
double norm(const ProductTangent& a);

/// R part unchanged, L part projected onto the horizontal space (I - L L^T) G_L.
ProductTangent project_tangent(const ProductPoint& P, const EuclideanGradient& G);

/// R + step * R_dir, and the Q factor (positive-diagonal R factor) of
/// L + step * L_dir. Throws RetractionError when that matrix is rank deficient.
ProductPoint retract(const ProductPoint& P, const ProductTangent& xi, double step);

/// Projection-based transport of xi into the horizontal space at P_new.
ProductTangent transport(const ProductPoint& P_new, const ProductTangent& xi);

/// Thin Q factor with the sign convention diag(R) > 0. Throws
/// RetractionError if a diagonal entry of R is numerically zero.
Matrix qf(const Matrix& A);

struct RcgdOptions {
  int maxiter = 30;
  double tol = 1e-6;
  double initial_step = 1.0;
  double contraction = 0.5;
  double sufficient_decrease = 1e-4;
  int max_halvings = 30;
  /// Accepted iterates must keep ||L^T L - I||_F below this; violations throw.
  double feasibility_tol = 1e-10;
};

struct TraceEntry {
  int iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

enum class RcgdStatus { GradientTolerance, MaxIterations, LineSearchFailure };

struct RcgdResult {
  ProductPoint point;
  std::vector<TraceEntry> trace;
  RcgdStatus status = RcgdStatus::MaxIterations;
  double max_feasibility_error = 0.0;
};

using LossFn = std::function<double(const ProductPoint&)>;
using GradFn = std::function<EuclideanGradient(const ProductPoint&)>;

/// Riemannian conjugate gradient (Polak-Ribiere+, Armijo backtracking).
/// The trace starts with the initial point and gets one entry per accepted
/// step; its objective column is non-increasing.
RcgdResult rcgd(const LossFn& loss, const GradFn& grad, const ProductPoint& init,
                const RcgdOptions& options = {});

/// "iter,objective,gradnorm,step" lines with a header.
void write_trace(std::ostream& os, const std::vector<TraceEntry>& trace);

}  // namespace opml
