#include "opml/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "opml/rng.hpp"

namespace opml {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::array<double, 2> ring_point(double radius, double degrees) {
  return {radius * std::cos(degrees * kDeg), radius * std::sin(degrees * kDeg)};
}

std::array<double, 2> gaussian_center(const SyntheticLayout& layout, int c) {
  return ring_point(layout.ring_radius, 60.0 + 120.0 * c);
}

}  // namespace

std::vector<std::array<double, 2>> synthetic_class_centroids(const SyntheticLayout& layout) {
  std::vector<std::array<double, 2>> out;
  for (int c = 0; c < 3; ++c) {
    const double angle = 120.0 * c;
    const auto center = ring_point(layout.ring_radius, angle);
    // Half-annulus spans [angle, angle + 180]; its bulge points at angle + 90.
    const auto bulge = ring_point(2.0 / std::numbers::pi * layout.crescent_radius, angle + 90.0);
    out.push_back({center[0] + bulge[0], center[1] + bulge[1]});
  }
  for (int c = 0; c < 3; ++c) out.push_back(gaussian_center(layout, c));
  return out;
}

SyntheticSet gen_synthetic(std::uint64_t seed, const SyntheticLayout& layout) {
  Rng rng(seed);
  const int n = 6 * layout.per_class + layout.noise_points;
  RowMatrix X(n, 2);
  std::vector<int> labels(static_cast<std::size_t>(n));
  int row = 0;
  for (int c = 0; c < 3; ++c) {
    const double rotation = 120.0 * c;
    const auto center = ring_point(layout.ring_radius, rotation);
    for (int k = 0; k < layout.per_class; ++k, ++row) {
      const double phi = rotation + rng.uniform(0.0, 180.0);
      const double r = layout.crescent_radius + rng.uniform(-0.5, 0.5) * layout.crescent_width;
      const auto offset = ring_point(r, phi);
      X(row, 0) = center[0] + offset[0];
      X(row, 1) = center[1] + offset[1];
      labels[static_cast<std::size_t>(row)] = c;
    }
  }
  for (int c = 0; c < 3; ++c) {
    const auto center = gaussian_center(layout, c);
    for (int k = 0; k < layout.per_class; ++k, ++row) {
      X(row, 0) = rng.normal(center[0], layout.gaussian_sigma);
      X(row, 1) = rng.normal(center[1], layout.gaussian_sigma);
      labels[static_cast<std::size_t>(row)] = 3 + c;
    }
  }
  for (int k = 0; k < layout.noise_points; ++k, ++row) {
    X(row, 0) = rng.uniform(-layout.box_half_width, layout.box_half_width);
    X(row, 1) = rng.uniform(-layout.box_half_width, layout.box_half_width);
    labels[static_cast<std::size_t>(row)] = kNoise;
  }
  return {FeatureMatrix(std::move(X)), std::move(labels)};
}

SyntheticSet gen_synthetic_lifted(std::uint64_t seed, int extra_dims, double nuisance_sigma,
                                  const SyntheticLayout& layout) {
  SyntheticSet base = gen_synthetic(seed, layout);
  const Index n = base.X.n();
  RowMatrix X(n, 2 + extra_dims);
  X.leftCols(2) = base.X.data();
  Rng rng = Rng::stream(seed, 0x6c696674);
  for (Index i = 0; i < n; ++i) {
    for (int c = 0; c < extra_dims; ++c) X(i, 2 + c) = rng.normal(0.0, nuisance_sigma);
  }
  return {FeatureMatrix(std::move(X)), std::move(base.labels)};
}

}  // namespace opml
