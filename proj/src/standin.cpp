#include "hypercondense/standin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "hypercondense/errors.hpp"

namespace hypercondense {

Hypergraph make_standin(const StandinOptions& o) {
  const int c = static_cast<int>(o.class_sizes.size());
  const Index n = std::accumulate(o.class_sizes.begin(), o.class_sizes.end(), Index{0});
  if (c < 2 || n < 3 || o.num_edges < 1 || o.num_pins < 2 * o.num_edges || o.num_features < c) {
    throw Error(ErrorCode::ConfigError, "stand-in: inconsistent size options");
  }

  Rng label_rng(o.seed, "standin-labels");
  std::vector<int> labels;
  for (int k = 0; k < c; ++k) labels.insert(labels.end(), o.class_sizes[k], k);
  label_rng.shuffle(labels);

  std::vector<std::vector<Index>> by_class(c);
  for (Index v = 0; v < n; ++v) by_class[labels[v]].push_back(v);

  // Vocabulary: each class owns a disjoint block of topic words; every word
  // can also appear as background noise.
  const Index block = o.topic_words > 0 ? std::min(o.topic_words, o.num_features / c) : o.num_features / c;
  Rng word_rng(o.seed, "standin-words");
  Matrix features = Matrix::Zero(n, o.num_features);
  for (Index v = 0; v < n; ++v) {
    int topic = labels[v];
    if (o.label_noise > 0.0 && word_rng.uniform01() < o.label_noise) topic = static_cast<int>(word_rng.uniform_index(c));
    // Bag size 1 + Binomial(4m, (m - 1) / 4m), which has mean m.
    Index words = 1;
    for (int trial = 0; trial < 4 * static_cast<int>(o.words_per_node); ++trial) {
      if (word_rng.uniform01() < (o.words_per_node - 1.0) / (4.0 * o.words_per_node)) ++words;
    }
    for (Index w = 0; w < words; ++w) {
      Index word;
      if (word_rng.uniform01() < o.topic_purity) {
        word = topic * block + static_cast<Index>(word_rng.uniform_index(block));
      } else {
        word = static_cast<Index>(word_rng.uniform_index(o.num_features));
      }
      features(v, word) = 1.0;
    }
  }

  // Hyperedge sizes: at least two members, the remaining pins spread uniformly.
  Rng edge_rng(o.seed, "standin-edges");
  std::vector<Index> sizes(o.num_edges, 2);
  for (Index extra = o.num_pins - 2 * o.num_edges; extra > 0;) {
    const Index e = static_cast<Index>(edge_rng.uniform_index(o.num_edges));
    if (sizes[e] < n / 4) {
      ++sizes[e];
      --extra;
    }
  }
  std::vector<std::vector<Index>> edges;
  edges.reserve(o.num_edges);
  for (Index e = 0; e < o.num_edges; ++e) {
    const Index anchor = static_cast<Index>(edge_rng.uniform_index(n));
    std::set<Index> members{anchor};
    while (static_cast<Index>(members.size()) < sizes[e]) {
      if (edge_rng.uniform01() < o.edge_homophily) {
        const auto& pool = by_class[labels[anchor]];
        members.insert(pool[edge_rng.uniform_index(pool.size())]);
      } else {
        members.insert(static_cast<Index>(edge_rng.uniform_index(n)));
      }
    }
    edges.emplace_back(members.begin(), members.end());
  }
  return Hypergraph(std::move(features), std::move(edges), std::move(labels), c);
}

Hypergraph random_hypergraph(Index num_nodes, Index num_edges, Index max_edge_size, Index num_features,
                             int num_classes, Rng& rng) {
  if (num_nodes < 3 * num_classes) {
    throw Error(ErrorCode::ConfigError, "random hypergraph needs at least three nodes per class");
  }
  std::vector<int> labels(num_nodes);
  for (Index v = 0; v < num_nodes; ++v) labels[v] = static_cast<int>(v % num_classes);
  rng.shuffle(labels);
  Matrix features(num_nodes, num_features);
  for (Index i = 0; i < num_nodes; ++i) {
    for (Index j = 0; j < num_features; ++j) features(i, j) = rng.normal();
  }
  std::vector<std::vector<Index>> edges(num_edges);
  for (auto& e : edges) {
    const Index size = 1 + static_cast<Index>(rng.uniform_index(std::min(max_edge_size, num_nodes)));
    for (std::size_t k : rng.sample_without_replacement(num_nodes, size)) e.push_back(static_cast<Index>(k));
  }
  return Hypergraph(std::move(features), std::move(edges), std::move(labels), num_classes);
}

}  // namespace hypercondense
