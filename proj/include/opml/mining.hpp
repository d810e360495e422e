#pragma once

#include <span>
#include <vector>

#include "opml/features.hpp"
#include "opml/rng.hpp"
#include "opml/triplet.hpp"
#include "opml/types.hpp"

namespace opml {

struct MiningOptions {
  Index per_anchor = 1;  // positives sampled per anchor, without replacement
};

/// Semi-hard triplets under the metric L: for every anchor with a same-label
/// partner, sample positives, then take the nearest negative strictly
/// farther than the positive, or the nearest negative if none is farther.
/// Noise-labeled rows never take part. When `subset` is non-empty only those
/// rows are used (a mini-batch); indices in the result always refer to X.
/// Fewer than two clusters among the used rows gives an empty set and a
/// warning.
TripletSet mine_semihard(const FeatureMatrix& X, std::span<const int> labels, const Matrix& L,
                         const MiningOptions& options, Rng& rng,
                         std::span<const Index> subset = {});

}  // namespace opml
