#pragma once

#include <cstdint>
#include <vector>

#include "hypercondense/hypergraph.hpp"
#include "hypercondense/rng.hpp"

namespace hypercondense {

/// Synthetic citation-style hypergraph used when the real co-citation data is
/// not available. Defaults match the public Cora co-citation statistics:
/// 2708 nodes, 1579 hyperedges, 7494 pins, 1433 binary word features and the
/// seven class sizes of that dataset.
struct StandinOptions {
  std::vector<Index> class_sizes{351, 217, 418, 818, 426, 298, 180};
  Index num_edges = 1579;
  Index num_pins = 7494;
  Index num_features = 1433;
  double words_per_node = 18.0;  // mean bag-of-words size
  double topic_purity = 0.28;    // share of a node's words drawn from its class vocabulary
  Index topic_words = 40;        // words per class vocabulary; 0 = num_features / classes
  double edge_homophily = 0.5;   // share of hyperedge members sharing the anchor's class
  double label_noise = 0.0;      // share of nodes whose words follow a different class
  std::uint64_t seed = 0;
};

Hypergraph make_standin(const StandinOptions& options);

/// Small random hypergraph for tests and the theory checks: Gaussian
/// features, edges of size 1..max_edge_size, every class given at least
/// three nodes (so it can be split).
Hypergraph random_hypergraph(Index num_nodes, Index num_edges, Index max_edge_size, Index num_features,
                             int num_classes, Rng& rng);

}  // namespace hypercondense
