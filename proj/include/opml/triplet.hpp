#pragma once

#include <vector>

#include "opml/types.hpp"

namespace opml {

/// Indices of an (anchor, positive, negative) triple into a feature matrix.
struct Triplet {
  Index anchor = 0;
  Index positive = 0;
  Index negative = 0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Triplets over the rows of one feature matrix. Empty is legal and marks a
/// batch that yields no constraints.
struct TripletSet {
  std::vector<Triplet> triplets;
  Index source_rows = 0;

  bool empty() const { return triplets.empty(); }
  std::size_t size() const { return triplets.size(); }

  friend bool operator==(const TripletSet&, const TripletSet&) = default;
};

}  // namespace opml
