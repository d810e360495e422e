#pragma once

#include <vector>

#include "opml/features.hpp"
#include "opml/triplet.hpp"
#include "opml/types.hpp"

namespace opml {

/// Metric parameters: the orthonormal projection L (a Grassmann point), the
/// unconstrained weighting matrix R of the same shape, and the angle bound.
class MetricParams {
 public:
  /// Validates shapes, l < d, ||L^T L - I||_F <= 1e-8 and 0 < alpha < 90.
  MetricParams(Matrix L, Matrix R, double alpha_degrees);

  const Matrix& L() const { return L_; }
  const Matrix& R() const { return R_; }
  double alpha_degrees() const { return alpha_degrees_; }
  /// 4 tan^2(alpha), recomputed whenever alpha changes.
  double tan2a() const { return tan2a_; }
  Index d() const { return L_.rows(); }
  Index l() const { return L_.cols(); }

  void set_alpha_degrees(double alpha_degrees);

 private:
  Matrix L_;
  Matrix R_;
  double alpha_degrees_;
  double tan2a_;
};

/// 4 tan^2(alpha) for alpha in degrees.
double angular_coefficient(double alpha_degrees);

/// Frobenius norm of L^T L - I.
double orthogonality_error(const Matrix& L);

/// Whether the per-triplet weight w is learned (via R) or fixed to 1.
enum class Weighting { Learned, Unit };

struct LossBreakdown {
  std::vector<double> z, m, w_plus, w_minus, w, f, p;
  double total = 0.0;
};

struct EuclideanGradient {
  Matrix G_R;
  Matrix G_L;
};

/// (x - y)^T L L^T (x - y), i.e. ||L^T (x - y)||^2.
double mahalanobis_sq(const Matrix& L, const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& y);

/// Midpoint of the anchor and positive rows.
Vector anchor_positive_average(const FeatureMatrix& X, const Triplet& t);

/// Angular hinge argument: d_L(a,p)^2 - tan2a * d_L(n, avg)^2.
double angular_hinge_z(const Matrix& L, const Triplet& t, double tan2a, const FeatureMatrix& X);

/// Smooth hinge log(1 + exp(z)).
double smooth_m(double z);

struct TripletWeights {
  double w_plus;
  double w_minus;
  double w;
};

TripletWeights weights(const Matrix& R, const Triplet& t, const FeatureMatrix& X);

/// -log sigma(-f), evaluated as softplus(f).
double triplet_nll(double f);

/// Negative log-likelihood of all triplets satisfying the angular
/// constraint. An empty set gives 0 with an empty breakdown.
LossBreakdown objective(const Matrix& R, const Matrix& L, double tan2a, const TripletSet& T,
                        const FeatureMatrix& X, Weighting weighting = Weighting::Learned);
LossBreakdown objective(const MetricParams& params, const TripletSet& T, const FeatureMatrix& X,
                        Weighting weighting = Weighting::Learned);

/// Objective value only (no breakdown), the hot path for line searches.
double objective_value(const Matrix& R, const Matrix& L, double tan2a, const TripletSet& T,
                       const FeatureMatrix& X);

/// Exact Euclidean gradients of the objective with respect to R and L.
EuclideanGradient euclid_grads(const Matrix& R, const Matrix& L, double tan2a,
                               const TripletSet& T, const FeatureMatrix& X);
EuclideanGradient euclid_grads(const MetricParams& params, const TripletSet& T,
                               const FeatureMatrix& X);

}  // namespace opml
