#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "opml/features.hpp"

namespace opml {

/// Layout of the 2-D crescents + Gaussians benchmark.
struct SyntheticLayout {
  int per_class = 150;
  int noise_points = 300;
  double ring_radius = 3.0;      // class centers sit on this ring
  double crescent_radius = 1.2;  // radius of each half-annulus
  double crescent_width = 0.2;
  double gaussian_sigma = 0.25;
  double box_half_width = 15.0;  // noise is uniform over [-b, b]^2
};

struct SyntheticSet {
  FeatureMatrix X;
  std::vector<int> labels;  // 0-2 crescents, 3-5 Gaussians, -1 noise
};

/// Three crescents at ring angles 0/120/240 degrees (each a half-annulus
/// rotated by its ring angle), three isotropic Gaussians interleaved at
/// 60/180/300 degrees, and uniform noise over a box much wider than the
/// classes. The wide noise is what drags k-means centroids off the classes.
/// Rows are grouped by class (crescents 0-2, Gaussians 3-5), noise last.
SyntheticSet gen_synthetic(std::uint64_t seed, const SyntheticLayout& layout = {});

/// Class centroid implied by the layout constants (crescent centroids sit
/// 2/pi * radius off their center along the bulge direction).
std::vector<std::array<double, 2>> synthetic_class_centroids(const SyntheticLayout& layout = {});

/// The synthetic set embedded in `2 + extra_dims` dimensions: the first two
/// columns carry the class structure, the rest are isotropic Gaussian
/// nuisance coordinates with standard deviation `nuisance_sigma`.
SyntheticSet gen_synthetic_lifted(std::uint64_t seed, int extra_dims, double nuisance_sigma,
                                  const SyntheticLayout& layout = {});

}  // namespace opml
