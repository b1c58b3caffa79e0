#pragma once

#include <cstdint>

#include "hypercondense/hypergraph.hpp"

namespace hypercondense {

struct SplitFractions {
  double train = 0.5;
  double val = 0.25;
  double test = 0.25;
};

/// Class-stratified train/val/test assignment.
///
/// Global split sizes are round(f * N) for train and val (test takes the
/// rest); each size is apportioned across classes by largest remainder, with
/// at least one training node per class. Deterministic per seed.
/// Throws CannotStratify when some class has fewer than three nodes.
Hypergraph make_splits(const Hypergraph& h, SplitFractions fractions, std::uint64_t seed);

}  // namespace hypercondense
