// Serial reference vs OpenMP kernels. Thread count comes from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "opml/kernels.hpp"
#include "opml/rng.hpp"

namespace {

using namespace opml;

RowMatrix random_rows(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = rng.normal();
  return X;
}

Matrix random_matrix(Index d, Index l, std::uint64_t seed) {
  return random_rows(d, l, seed);
}

std::vector<Triplet> random_triplets(Index n, Index count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Triplet> T;
  while (static_cast<Index>(T.size()) < count) {
    const auto a = static_cast<Index>(rng.index(n));
    const auto p = static_cast<Index>(rng.index(n));
    const auto q = static_cast<Index>(rng.index(n));
    if (a != p && q != a && q != p) T.push_back({a, p, q});
  }
  return T;
}

template <auto Fn>
void knn(benchmark::State& state) {
  const RowMatrix X = random_rows(state.range(0), 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(X, 20));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void terms(benchmark::State& state) {
  const RowMatrix X = random_rows(2000, 64, 2);
  const auto T = random_triplets(2000, state.range(0), 3);
  const Matrix R = random_matrix(64, 16, 4), L = random_matrix(64, 16, 5);
  LossBreakdown out;
  for (auto _ : state) {
    Fn(X, T, R, L, 4.0, Weighting::Learned, out);
    benchmark::DoNotOptimize(out.total);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void gradient(benchmark::State& state) {
  const RowMatrix X = random_rows(2000, 64, 2);
  const auto T = random_triplets(2000, state.range(0), 3);
  const Matrix R = random_matrix(64, 16, 4), L = random_matrix(64, 16, 5);
  Matrix G_R, G_L;
  for (auto _ : state) {
    Fn(X, T, R, L, 4.0, G_R, G_L);
    benchmark::DoNotOptimize(G_L.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(knn<kernels::serial::knn_rows>)->Name("knn_rows/serial")->Arg(500)->Arg(2000);
BENCHMARK(knn<kernels::omp::knn_rows>)->Name("knn_rows/omp")->Arg(500)->Arg(2000)->UseRealTime();
BENCHMARK(terms<kernels::serial::triplet_terms>)->Name("triplet_terms/serial")->Arg(1000)->Arg(10000);
BENCHMARK(terms<kernels::omp::triplet_terms>)->Name("triplet_terms/omp")->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(gradient<kernels::serial::loss_gradient>)->Name("loss_gradient/serial")->Arg(1000)->Arg(10000);
BENCHMARK(gradient<kernels::omp::loss_gradient>)->Name("loss_gradient/omp")->Arg(1000)->Arg(10000)->UseRealTime();

BENCHMARK_MAIN();
