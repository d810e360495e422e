#pragma once

#include "opml/types.hpp"

namespace opml {

/// N x d matrix of example descriptors, one example per row. Entries are
/// checked finite on construction.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(RowMatrix data, bool normalized = false);

  const RowMatrix& data() const { return data_; }
  Index n() const { return data_.rows(); }
  Index d() const { return data_.cols(); }
  bool normalized() const { return normalized_; }

  auto row(Index i) const { return data_.row(i); }

  /// Rows `indices` as a new matrix (same normalized flag).
  FeatureMatrix select_rows(const std::vector<Index>& indices) const;

 private:
  RowMatrix data_;
  bool normalized_ = false;
};

/// Scales every row to unit Euclidean norm. Throws InvalidArgument naming
/// the first all-zero row.
FeatureMatrix l2_normalize(const FeatureMatrix& X);

/// Divides every entry by the largest row norm, so all rows lie in the unit
/// ball. Throws InvalidArgument when every row is zero.
FeatureMatrix scale_to_unit_ball(const FeatureMatrix& X);

}  // namespace opml
