#pragma once

#include <Eigen/Dense>

namespace opml {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Label value for examples filtered out as noise.
inline constexpr int kNoise = -1;

}  // namespace opml
