#include "doctest.h"

#include <algorithm>

#include "helpers.hpp"
#include "opml/kernels.hpp"
#include "opml/parallel.hpp"

using namespace opml;
namespace K = opml::kernels;

namespace {

struct ThreadGuard {
  int saved = parallel::threads();
  ~ThreadGuard() { parallel::set_threads(saved); }
};

constexpr int kTeams[] = {1, 2, 4};

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

}  // namespace

TEST_CASE("knn rows: OpenMP matches the serial reference") {
  ThreadGuard guard;
  Rng rng(91);
  const FeatureMatrix X = testing::random_features(rng, 150, 5);
  const K::KnnRows ref = K::serial::knn_rows(X.data(), 9);
  CHECK(ref.neighbors.size() == 150 * 9);
  for (const int t : kTeams) {
    parallel::set_threads(t);
    const K::KnnRows got = K::omp::knn_rows(X.data(), 9);
    CHECK(got.neighbors == ref.neighbors);
    CHECK(got.max_sq_dist == doctest::Approx(ref.max_sq_dist).epsilon(1e-14));
    for (std::size_t i = 0; i < ref.sq_dist.size(); ++i)
      CHECK(got.sq_dist[i] == doctest::Approx(ref.sq_dist[i]).epsilon(1e-14));
  }
}

TEST_CASE("gather: OpenMP matches the serial reference") {
  ThreadGuard guard;
  Rng rng(92);
  const Index n = 200;
  K::InEdges in;
  in.offsets.push_back(0);
  for (Index j = 0; j < n; ++j) {
    const Index deg = 1 + static_cast<Index>(rng.index(6));
    for (Index e = 0; e < deg; ++e) {
      in.sources.push_back(static_cast<Index>(rng.index(n)));
      in.probs.push_back(rng.uniform());
    }
    in.offsets.push_back(static_cast<Index>(in.sources.size()));
  }
  std::vector<double> x(n), ref(n), got(n);
  for (double& v : x) v = rng.uniform();
  K::serial::gather(in, x, ref);
  for (const int t : kTeams) {
    parallel::set_threads(t);
    K::omp::gather(in, x, got);
    CHECK(got == ref);
  }
}

TEST_CASE("triplet terms and gradients: OpenMP matches the serial reference") {
  ThreadGuard guard;
  Rng rng(93);
  const FeatureMatrix X = testing::random_features(rng, 120, 8);
  const TripletSet T = testing::random_triplets(rng, 120, 400);
  const Matrix R = testing::gaussian(rng, 8, 3, 0.5);
  const Matrix L = testing::orthonormal(rng, 8, 3);

  LossBreakdown ref;
  K::serial::triplet_terms(X.data(), T.triplets, R, L, 4.0, Weighting::Learned, ref);
  Matrix GR_ref, GL_ref;
  K::serial::loss_gradient(X.data(), T.triplets, R, L, 4.0, GR_ref, GL_ref);

  LossBreakdown first;
  Matrix GR_first, GL_first;
  for (const int t : kTeams) {
    parallel::set_threads(t);
    LossBreakdown got;
    K::omp::triplet_terms(X.data(), T.triplets, R, L, 4.0, Weighting::Learned, got);
    Matrix GR, GL;
    K::omp::loss_gradient(X.data(), T.triplets, R, L, 4.0, GR, GL);

    CHECK(got.total == doctest::Approx(ref.total).epsilon(1e-13));
    for (std::size_t i = 0; i < ref.f.size(); ++i) {
      CHECK(got.z[i] == doctest::Approx(ref.z[i]).epsilon(1e-12));
      CHECK(got.f[i] == doctest::Approx(ref.f[i]).epsilon(1e-12));
    }
    CHECK(rel(GR, GR_ref) <= 1e-12);
    CHECK(rel(GL, GL_ref) <= 1e-12);

    // the thread count never changes a bit
    if (t == 1) {
      first = got;
      GR_first = GR;
      GL_first = GL;
    } else {
      CHECK(got.total == first.total);
      CHECK(got.f == first.f);
      CHECK(GR == GR_first);
      CHECK(GL == GL_first);
    }
  }
}

TEST_CASE("semi-hard negatives: OpenMP matches the serial reference") {
  ThreadGuard guard;
  Rng rng(94);
  const Index n = 100;
  const FeatureMatrix E = testing::random_features(rng, n, 3);
  std::vector<int> labels(n);
  for (int& l : labels) l = static_cast<int>(rng.index(5)) - 1;
  std::vector<Index> anchors, positives, candidates;
  for (Index i = 0; i < n; i += 2) candidates.push_back(i);
  for (int k = 0; k < 60; ++k) {
    anchors.push_back(candidates[rng.index(candidates.size())]);
    positives.push_back(candidates[rng.index(candidates.size())]);
  }
  const K::MiningQuery q{anchors, positives, candidates, labels};
  const std::vector<Index> ref = K::serial::semihard_negatives(E.data(), q);
  CHECK(ref.size() == anchors.size());
  for (const int t : kTeams) {
    parallel::set_threads(t);
    CHECK(K::omp::semihard_negatives(E.data(), q) == ref);
  }
}
