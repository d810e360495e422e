#include "opml/mining.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "opml/diag.hpp"
#include "opml/error.hpp"
#include "opml/kernels.hpp"

namespace opml {

TripletSet mine_semihard(const FeatureMatrix& X, std::span<const int> labels, const Matrix& L,
                         const MiningOptions& options, Rng& rng, std::span<const Index> subset) {
  if (static_cast<Index>(labels.size()) != X.n()) {
    throw DimensionMismatch("triplet-mining", "label count does not match example count");
  }
  if (L.rows() != X.d()) throw DimensionMismatch("triplet-mining", "L rows do not match feature dimension");
  if (options.per_anchor < 1) throw InvalidArgument("triplet-mining", "per_anchor must be positive");

  std::vector<Index> rows;
  if (subset.empty()) {
    rows.resize(static_cast<std::size_t>(X.n()));
    for (Index i = 0; i < X.n(); ++i) rows[static_cast<std::size_t>(i)] = i;
  } else {
    rows.assign(subset.begin(), subset.end());
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  }

  std::map<int, std::vector<Index>> members;
  std::vector<Index> candidates;
  for (const Index r : rows) {
    if (r < 0 || r >= X.n()) throw InvalidArgument("triplet-mining", "subset index out of range");
    const int lab = labels[static_cast<std::size_t>(r)];
    if (lab == kNoise) continue;
    members[lab].push_back(r);
    candidates.push_back(r);
  }

  TripletSet out;
  out.source_rows = X.n();
  if (members.size() < 2) {
    diag::warn("triplet mining needs at least 2 non-noise clusters, found " +
               std::to_string(members.size()));
    return out;
  }

  // Positive draws happen serially, in anchor order, so the output does not
  // depend on how the negative search is scheduled.
  std::vector<Index> anchors;
  std::vector<Index> positives;
  std::vector<Index> pool;
  for (const Index a : candidates) {
    const auto& group = members[labels[static_cast<std::size_t>(a)]];
    if (group.size() < 2) continue;
    pool.clear();
    for (const Index g : group) {
      if (g != a) pool.push_back(g);
    }
    const auto draws = std::min<std::size_t>(static_cast<std::size_t>(options.per_anchor), pool.size());
    for (std::size_t k = 0; k < draws; ++k) {
      const auto pick = k + rng.index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
      anchors.push_back(a);
      positives.push_back(pool[k]);
    }
  }

  const RowMatrix E = X.data() * L;
  const kernels::MiningQuery query{anchors, positives, candidates, labels};
  const std::vector<Index> negatives = kernels::omp::semihard_negatives(E, query);
  out.triplets.reserve(anchors.size());
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    if (negatives[k] >= 0) out.triplets.push_back({anchors[k], positives[k], negatives[k]});
  }
  return out;
}

}  // namespace opml
