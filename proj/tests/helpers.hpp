#pragma once

// Random instances shared by the unit tests and the acceptance binary.

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "opml/features.hpp"
#include "opml/rng.hpp"
#include "opml/triplet.hpp"
#include "opml/types.hpp"

namespace testing {

using opml::Index;
using opml::Matrix;
using opml::Rng;
using opml::RowMatrix;

inline Matrix gaussian(Rng& rng, Index rows, Index cols, double sigma = 1.0) {
  Matrix A(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) A(i, j) = rng.normal(0.0, sigma);
  return A;
}

// Orthonormal columns via Householder QR; no sign fix, so the oracle does not
// share the library's qf.
inline Matrix orthonormal(Rng& rng, Index d, Index l) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, d, l));
  return qr.householderQ() * Matrix::Identity(d, l);
}

inline Matrix orthogonal(Rng& rng, Index l) { return orthonormal(rng, l, l); }

inline opml::FeatureMatrix random_features(Rng& rng, Index n, Index d, double sigma = 1.0) {
  RowMatrix X = gaussian(rng, n, d, sigma);
  return opml::FeatureMatrix(std::move(X));
}

// Triplets with a != p and n distinct from both; labels are not involved.
inline opml::TripletSet random_triplets(Rng& rng, Index n, Index count) {
  opml::TripletSet T;
  T.source_rows = n;
  while (static_cast<Index>(T.triplets.size()) < count) {
    const auto a = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    const auto p = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    const auto q = static_cast<Index>(rng.index(static_cast<std::uint64_t>(n)));
    if (a == p || q == a || q == p) continue;
    T.triplets.push_back({a, p, q});
  }
  return T;
}

// Largest principal angle between the column spans of orthonormal A and B.
// ||A A^T - B B^T||_2 is the sine of that angle, which stays accurate when
// the angle is tiny (the cosine form does not).
inline double subspace_angle(const Matrix& A, const Matrix& B) {
  Eigen::JacobiSVD<Matrix> svd(A * A.transpose() - B * B.transpose());
  return std::asin(std::min(1.0, svd.singularValues()(0)));
}

}  // namespace testing
