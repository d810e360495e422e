#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <sstream>

#include "helpers.hpp"
#include "opml/error.hpp"
#include "opml/manifold.hpp"

using namespace opml;

namespace {

Matrix projector(const Matrix& M) {
  return M * (M.transpose() * M).inverse() * M.transpose();
}

}  // namespace

TEST_CASE("tangent projection removes the vertical part") {
  Rng rng(61);
  const Matrix L = testing::orthonormal(rng, 7, 3);
  const EuclideanGradient G{testing::gaussian(rng, 7, 3), testing::gaussian(rng, 7, 3)};
  const ProductPoint P{testing::gaussian(rng, 7, 3), L};
  const ProductTangent xi = project_tangent(P, G);
  CHECK(xi.R_dir == G.G_R);
  CHECK((L.transpose() * xi.L_dir).norm() <= 1e-13);
  // idempotent
  const ProductTangent again = project_tangent(P, {xi.R_dir, xi.L_dir});
  CHECK((again.L_dir - xi.L_dir).norm() <= 1e-13);
  // a vertical direction L * S vanishes
  const Matrix S = testing::gaussian(rng, 3, 3);
  CHECK(project_tangent(P, {G.G_R, L * S}).L_dir.norm() <= 1e-13);
}

TEST_CASE("product metric") {
  const ProductTangent a{Matrix::Constant(2, 1, 1.0), Matrix::Constant(2, 1, 2.0)};
  const ProductTangent b{Matrix::Constant(2, 1, 3.0), Matrix::Constant(2, 1, -1.0)};
  CHECK(inner(a, b) == 2.0);
  CHECK(norm(a) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("qf sign convention") {
  Rng rng(62);
  const Matrix A = testing::gaussian(rng, 6, 3);
  const Matrix Q = qf(A);
  CHECK(orthogonality_error(Q) <= 1e-13);
  const Matrix Rf = Q.transpose() * A;
  for (Index j = 0; j < 3; ++j) {
    CHECK(Rf(j, j) > 0.0);
    for (Index i = j + 1; i < 3; ++i) CHECK(std::abs(Rf(i, j)) <= 1e-12);
  }
  CHECK((Q * Rf - A).norm() <= 1e-12);
  Matrix B = A;
  B.col(2) = B.col(0) + B.col(1);
  CHECK_THROWS_AS(qf(B), RetractionError);
}

TEST_CASE("retraction") {
  Rng rng(63);
  for (int rep = 0; rep < 20; ++rep) {
    const ProductPoint P{testing::gaussian(rng, 8, 3), testing::orthonormal(rng, 8, 3)};
    const ProductTangent xi = project_tangent(P, {testing::gaussian(rng, 8, 3), testing::gaussian(rng, 8, 3)});
    const ProductPoint same = retract(P, xi, 0.0);
    CHECK(same.R == P.R);
    CHECK(same.L == P.L);
    const double t = rng.uniform(0.01, 2.0);
    const ProductPoint Q = retract(P, xi, t);
    CHECK((Q.R - (P.R + t * xi.R_dir)).norm() <= 1e-14);
    CHECK(orthogonality_error(Q.L) <= 1e-12);
    CHECK((Q.L * Q.L.transpose() - projector(P.L + t * xi.L_dir)).norm() <= 1e-10);
  }
}

TEST_CASE("transport lands in the horizontal space") {
  Rng rng(64);
  const ProductPoint P{testing::gaussian(rng, 6, 2), testing::orthonormal(rng, 6, 2)};
  const ProductTangent xi{testing::gaussian(rng, 6, 2), testing::gaussian(rng, 6, 2)};
  const ProductTangent moved = transport(P, xi);
  CHECK(moved.R_dir == xi.R_dir);
  CHECK((P.L.transpose() * moved.L_dir).norm() <= 1e-13);
}

TEST_CASE("rcgd on a quadratic in R") {
  Rng rng(65);
  const Matrix target = testing::gaussian(rng, 5, 2);
  const Matrix L0 = testing::orthonormal(rng, 5, 2);
  const LossFn loss = [&](const ProductPoint& p) { return 0.5 * (p.R - target).squaredNorm(); };
  const GradFn grad = [&](const ProductPoint& p) {
    return EuclideanGradient{p.R - target, Matrix::Zero(5, 2)};
  };
  const RcgdResult r = rcgd(loss, grad, {Matrix::Zero(5, 2), L0}, {.maxiter = 50, .tol = 1e-12});
  CHECK((r.point.R - target).norm() <= 1e-8);
  CHECK(r.status == RcgdStatus::GradientTolerance);
  CHECK(r.trace.size() <= 51);
  // L is only re-orthonormalized along a zero direction
  CHECK((r.point.L * r.point.L.transpose() - L0 * L0.transpose()).norm() <= 1e-14);
}

TEST_CASE("rcgd finds the dominant eigenspace") {
  Rng rng(66);
  const Index d = 10, l = 3;
  const Matrix Q = testing::orthogonal(rng, d);
  Vector ev(d);
  for (Index i = 0; i < d; ++i) ev(i) = 1.0 + static_cast<double>(i);
  const Matrix A = Q * ev.asDiagonal() * Q.transpose();
  const LossFn loss = [&](const ProductPoint& p) { return -(p.L.transpose() * A * p.L).trace(); };
  const GradFn grad = [&](const ProductPoint& p) {
    return EuclideanGradient{Matrix::Zero(d, l), -2.0 * A * p.L};
  };
  const RcgdResult r =
      rcgd(loss, grad, {Matrix::Zero(d, l), testing::orthonormal(rng, d, l)}, {.maxiter = 500, .tol = 1e-9});

  const Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  const Matrix top = es.eigenvectors().rightCols(l);
  CHECK(testing::subspace_angle(r.point.L, top) <= 1e-6);
  CHECK(r.max_feasibility_error <= 1e-10);
  CHECK(loss(r.point) == doctest::Approx(-(8.0 + 9.0 + 10.0)).epsilon(1e-10));
}

TEST_CASE("rcgd on the OPML objective is monotone and feasible") {
  Rng rng(67);
  const FeatureMatrix X = testing::random_features(rng, 40, 6);
  const TripletSet T = testing::random_triplets(rng, 40, 60);
  const double tan2a = 4.0;
  const LossFn loss = [&](const ProductPoint& p) { return objective_value(p.R, p.L, tan2a, T, X); };
  const GradFn grad = [&](const ProductPoint& p) { return euclid_grads(p.R, p.L, tan2a, T, X); };
  const Matrix L0 = testing::orthonormal(rng, 6, 2);
  const RcgdResult r = rcgd(loss, grad, {L0, L0}, {.maxiter = 40});
  REQUIRE(r.trace.size() >= 2);
  CHECK(r.trace.front().iter == 0);
  CHECK(r.trace.front().step == 0.0);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].objective <= r.trace[i - 1].objective);
    CHECK(r.trace[i].iter == static_cast<int>(i));
  }
  CHECK(r.trace.back().objective < r.trace.front().objective);
  CHECK(r.max_feasibility_error <= 1e-10);
  CHECK(orthogonality_error(r.point.L) <= 1e-10);
}

TEST_CASE("rcgd with maxiter 0 only records the start") {
  const Matrix L0 = Matrix::Identity(3, 1);
  const LossFn loss = [](const ProductPoint& p) { return p.R.squaredNorm(); };
  const GradFn grad = [](const ProductPoint& p) { return EuclideanGradient{2.0 * p.R, Matrix::Zero(3, 1)}; };
  const RcgdResult r = rcgd(loss, grad, {L0, L0}, {.maxiter = 0});
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].objective == 1.0);
  CHECK(r.trace[0].grad_norm == 2.0);
  CHECK(r.point.R == L0);
}

TEST_CASE("trace format") {
  std::ostringstream os;
  write_trace(os, {{0, 1.5, 2.0, 0.0}, {1, 0.25, 0.5, 0.125}});
  CHECK(os.str() == "iter,objective,gradnorm,step\n0,1.5,2,0\n1,0.25,0.5,0.125\n");
}
