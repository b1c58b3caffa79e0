#include "hypercondense/splits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypercondense/apportion.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/rng.hpp"

namespace hypercondense {

Hypergraph make_splits(const Hypergraph& h, SplitFractions fractions, std::uint64_t seed) {
  if (fractions.train <= 0 || fractions.val < 0 || fractions.test < 0 ||
      std::abs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigError, "split fractions must be non-negative and sum to 1");
  }
  const auto by_class = h.without_roles().nodes_by_class();
  const std::size_t num_classes = by_class.size();
  std::vector<std::int64_t> sizes(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    sizes[c] = static_cast<std::int64_t>(by_class[c].size());
    if (sizes[c] < 3) {
      throw Error(ErrorCode::CannotStratify, "class " + std::to_string(c) + " has only " +
                                                 std::to_string(sizes[c]) + " nodes (need >= 3)");
    }
  }
  const std::int64_t n = h.num_nodes();
  const auto train_total = static_cast<std::int64_t>(std::llround(fractions.train * n));
  const auto val_total = static_cast<std::int64_t>(std::llround(fractions.val * n));

  std::vector<std::int64_t> train_caps(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) train_caps[c] = sizes[c] - 1;
  const auto train = apportion(train_total, sizes, 1, train_caps);
  if (train.empty()) {
    throw Error(ErrorCode::CannotStratify, "cannot place " + std::to_string(train_total) +
                                               " training nodes with one per class");
  }
  std::vector<std::int64_t> val_caps(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) val_caps[c] = sizes[c] - train[c];
  const auto val = apportion(val_total, sizes, 0, val_caps);
  if (val.empty()) {
    throw Error(ErrorCode::CannotStratify,
                "cannot place " + std::to_string(val_total) + " validation nodes");
  }

  std::vector<NodeRole> roles(n, NodeRole::Test);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::vector<Index> nodes = by_class[c];
    Rng rng(seed, "split", c);
    rng.shuffle(nodes);
    for (std::int64_t k = 0; k < train[c]; ++k) roles[nodes[k]] = NodeRole::Train;
    for (std::int64_t k = train[c]; k < train[c] + val[c]; ++k) roles[nodes[k]] = NodeRole::Val;
  }
  return h.with_roles(std::move(roles));
}

}  // namespace hypercondense
