#include "opml/loss.hpp"

#include <cmath>
#include <numbers>

#include "opml/error.hpp"
#include "opml/kernels.hpp"
#include "opml/scalar.hpp"

namespace opml {

double angular_coefficient(double alpha_degrees) {
  // Half-angle form: std::tan(pi/4) rounds to 1 - 1ulp, this gives 1 exactly.
  const double two_a = alpha_degrees * std::numbers::pi / 90.0;
  const double t = std::sin(two_a) / (1.0 + std::cos(two_a));
  return 4.0 * t * t;
}

double orthogonality_error(const Matrix& L) {
  return (L.transpose() * L - Matrix::Identity(L.cols(), L.cols())).norm();
}

MetricParams::MetricParams(Matrix L, Matrix R, double alpha_degrees)
    : L_(std::move(L)), R_(std::move(R)), alpha_degrees_(0.0), tan2a_(0.0) {
  if (L_.rows() != R_.rows() || L_.cols() != R_.cols()) {
    throw DimensionMismatch("opml-loss", "L and R must have the same shape");
  }
  if (!(L_.cols() >= 1 && L_.cols() < L_.rows())) {
    throw InvalidArgument("opml-loss", "embedding size l must satisfy 1 <= l < d");
  }
  if (orthogonality_error(L_) > 1e-8) {
    throw FeasibilityError("opml-loss", "L does not have orthonormal columns");
  }
  set_alpha_degrees(alpha_degrees);
}

void MetricParams::set_alpha_degrees(double alpha_degrees) {
  if (!(alpha_degrees > 0.0 && alpha_degrees < 90.0)) {
    throw InvalidArgument("opml-loss", "alpha must lie strictly between 0 and 90 degrees");
  }
  alpha_degrees_ = alpha_degrees;
  tan2a_ = angular_coefficient(alpha_degrees);
}

double mahalanobis_sq(const Matrix& L, const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size() || x.size() != L.rows()) {
    throw DimensionMismatch("opml-loss", "vector and metric dimensions disagree");
  }
  return (L.transpose() * (x - y)).squaredNorm();
}

Vector anchor_positive_average(const FeatureMatrix& X, const Triplet& t) {
  return 0.5 * (X.row(t.anchor) + X.row(t.positive)).transpose();
}

double angular_hinge_z(const Matrix& L, const Triplet& t, double tan2a, const FeatureMatrix& X) {
  const Vector avg = anchor_positive_average(X, t);
  return mahalanobis_sq(L, X.row(t.anchor).transpose(), X.row(t.positive).transpose()) -
         tan2a * mahalanobis_sq(L, X.row(t.negative).transpose(), avg);
}

double smooth_m(double z) { return softplus(z); }

TripletWeights weights(const Matrix& R, const Triplet& t, const FeatureMatrix& X) {
  const Vector a = X.row(t.anchor).transpose();
  const Vector p = X.row(t.positive).transpose();
  const Vector n = X.row(t.negative).transpose();
  const Vector avg = 0.5 * (a + p);
  const double w_plus = sigmoid((R.transpose() * a).dot(R.transpose() * p));
  const double w_minus = 1.0 - sigmoid((R.transpose() * avg).dot(R.transpose() * n));
  return {w_plus, w_minus, 0.5 * (w_plus + w_minus)};
}

double triplet_nll(double f) { return softplus(f); }

namespace {

void check_shapes(const Matrix& R, const Matrix& L, const FeatureMatrix& X) {
  if (L.rows() != X.d() || R.rows() != X.d() || R.cols() != L.cols()) {
    throw DimensionMismatch("opml-loss", "parameter shapes do not match the feature dimension");
  }
}

}  // namespace

LossBreakdown objective(const Matrix& R, const Matrix& L, double tan2a, const TripletSet& T,
                        const FeatureMatrix& X, Weighting weighting) {
  check_shapes(R, L, X);
  LossBreakdown out;
  if (T.empty()) return out;
  kernels::omp::triplet_terms(X.data(), T.triplets, R, L, tan2a, weighting, out);
  return out;
}

LossBreakdown objective(const MetricParams& params, const TripletSet& T, const FeatureMatrix& X,
                        Weighting weighting) {
  return objective(params.R(), params.L(), params.tan2a(), T, X, weighting);
}

double objective_value(const Matrix& R, const Matrix& L, double tan2a, const TripletSet& T,
                       const FeatureMatrix& X) {
  return objective(R, L, tan2a, T, X).total;
}

EuclideanGradient euclid_grads(const Matrix& R, const Matrix& L, double tan2a,
                               const TripletSet& T, const FeatureMatrix& X) {
  check_shapes(R, L, X);
  EuclideanGradient g;
  if (T.empty()) {
    g.G_R = Matrix::Zero(R.rows(), R.cols());
    g.G_L = Matrix::Zero(L.rows(), L.cols());
    return g;
  }
  kernels::omp::loss_gradient(X.data(), T.triplets, R, L, tan2a, g.G_R, g.G_L);
  return g;
}

EuclideanGradient euclid_grads(const MetricParams& params, const TripletSet& T,
                               const FeatureMatrix& X) {
  return euclid_grads(params.R(), params.L(), params.tan2a(), T, X);
}

}  // namespace opml
