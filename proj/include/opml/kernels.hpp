#pragma once

// Hot loops of the library in two flavors: `serial` is the plain reference
// used by tests, `omp` is the OpenMP version used by the public API. Every
// omp kernel writes per-index outputs and reduces in a fixed order, so its
// results do not depend on the thread count.

#include <span>
#include <vector>

#include "opml/loss.hpp"
#include "opml/triplet.hpp"
#include "opml/types.hpp"

namespace opml::kernels {

/// k nearest neighbors of every row (self excluded), ordered by
/// (squared distance, index), plus the maximum squared distance over pairs.
struct KnnRows {
  Index n = 0;
  Index k = 0;
  std::vector<Index> neighbors;  // n * k, row-major
  std::vector<double> sq_dist;   // n * k, row-major
  double max_sq_dist = 0.0;
};

/// Incoming-edge (CSC-like) view of a row-stochastic matrix.
struct InEdges {
  std::vector<Index> offsets;  // n + 1
  std::vector<Index> sources;
  std::vector<double> probs;
};

/// Pairs for semi-hard mining plus the candidate pool to draw negatives from.
struct MiningQuery {
  std::span<const Index> anchors;
  std::span<const Index> positives;
  std::span<const Index> candidates;  // sorted row indices
  std::span<const int> labels;        // indexed by row
};

namespace serial {

KnnRows knn_rows(const RowMatrix& X, Index k);
void gather(const InEdges& in, std::span<const double> x, std::span<double> y);
/// Per-triplet terms and the total, summed in triplet order.
void triplet_terms(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Weighting weighting, LossBreakdown& out);
void loss_gradient(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Matrix& G_R, Matrix& G_L);
/// Negative for each (anchor, positive) pair under embedding E (one row per
/// example): nearest negative strictly farther than the positive, else the
/// nearest negative overall. -1 when no negative exists.
std::vector<Index> semihard_negatives(const RowMatrix& E, const MiningQuery& q);

}  // namespace serial

namespace omp {

KnnRows knn_rows(const RowMatrix& X, Index k);
void gather(const InEdges& in, std::span<const double> x, std::span<double> y);
void triplet_terms(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Weighting weighting, LossBreakdown& out);
void loss_gradient(const RowMatrix& X, std::span<const Triplet> T, const Matrix& R,
                   const Matrix& L, double tan2a, Matrix& G_R, Matrix& G_L);
std::vector<Index> semihard_negatives(const RowMatrix& E, const MiningQuery& q);

}  // namespace omp

}  // namespace opml::kernels
