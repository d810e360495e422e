#include "opml/features.hpp"

#include <cmath>
#include <string>

#include "opml/error.hpp"

namespace opml {

FeatureMatrix::FeatureMatrix(RowMatrix data, bool normalized)
    : data_(std::move(data)), normalized_(normalized) {
  if (!data_.allFinite()) {
    throw InvalidArgument("features", "feature matrix contains non-finite entries");
  }
  if (normalized_) {
    for (Index i = 0; i < data_.rows(); ++i) {
      if (std::abs(data_.row(i).norm() - 1.0) > 1e-9) {
        throw InvalidArgument("features",
                              "row " + std::to_string(i) + " is flagged normalized but has norm != 1");
      }
    }
  }
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<Index>& indices) const {
  RowMatrix out(static_cast<Index>(indices.size()), d());
  for (std::size_t r = 0; r < indices.size(); ++r) out.row(static_cast<Index>(r)) = data_.row(indices[r]);
  return FeatureMatrix(std::move(out), normalized_);
}

FeatureMatrix l2_normalize(const FeatureMatrix& X) {
  RowMatrix out = X.data();
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm == 0.0) {
      throw InvalidArgument("features", "cannot normalize all-zero row " + std::to_string(i));
    }
    out.row(i) /= norm;
  }
  return FeatureMatrix(std::move(out), true);
}

FeatureMatrix scale_to_unit_ball(const FeatureMatrix& X) {
  const double r = X.n() > 0 ? X.data().rowwise().norm().maxCoeff() : 0.0;
  if (r == 0.0) throw InvalidArgument("features", "cannot scale: every row is zero");
  return FeatureMatrix(X.data() / r, false);
}

}  // namespace opml
