#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hypercondense/matrix.hpp"

namespace hypercondense {

enum class NodeRole : std::uint8_t { Unassigned = 0, Train = 1, Val = 2, Test = 3 };

struct DegreePair {
  Vector node;  // d_v
  Vector edge;  // d_e
};

/// Attributed hypergraph with binary incidence stored twice in compressed
/// form: node -> incident edges and edge -> member nodes.
///
/// Nodes that belong to no input hyperedge receive a singleton self-edge at
/// construction so the symmetric normalisation stays defined. Those edges are
/// appended after the input edges; num_input_edges() still reports the count
/// found in the source data.
///
/// Copies are cheap (payload is shared and immutable). Label reads of test
/// nodes go through label(), which counts them; condensation and coreset
/// selection must leave that counter untouched.
class Hypergraph {
 public:
  /// Validates and builds. num_classes <= 0 infers C = max(label) + 1.
  /// Member lists are deduplicated and sorted.
  Hypergraph(Matrix features, std::vector<std::vector<Index>> edges, std::vector<int> labels,
             int num_classes = 0);

  Index num_nodes() const { return static_cast<Index>(data_->labels.size()); }
  Index num_edges() const { return static_cast<Index>(data_->edge_offsets.size()) - 1; }
  Index num_input_edges() const { return data_->num_input_edges; }
  Index num_self_loops() const { return num_edges() - num_input_edges(); }
  /// Sum of |e| over input edges (self-loops excluded).
  Index num_input_pins() const { return data_->num_input_pins; }
  Index num_features() const { return data_->features.cols(); }
  int num_classes() const { return data_->num_classes; }

  std::span<const Index> edge_members(Index e) const;
  std::span<const Index> node_edges(Index v) const;
  Index edge_size(Index e) const { return edge_members(e).size(); }
  Index node_degree(Index v) const { return node_edges(v).size(); }
  bool is_self_loop(Index e) const { return e >= num_input_edges(); }

  const Matrix& features() const { return data_->features; }
  DegreePair degrees() const;

  /// Audited label accessor.
  int label(Index v) const;

  bool has_split() const { return !roles_.empty(); }
  NodeRole role(Index v) const { return roles_.empty() ? NodeRole::Unassigned : roles_[v]; }
  std::span<const NodeRole> roles() const { return roles_; }
  std::vector<Index> nodes_with_role(NodeRole r) const;
  std::vector<bool> mask(NodeRole r) const;

  /// Training nodes grouped by class (each list ascending). Reads no test labels.
  std::vector<std::vector<Index>> training_nodes_by_class() const;
  /// Labels of the given nodes; every node must be a training node.
  std::vector<int> training_labels(std::span<const Index> nodes) const;

  /// Returns a copy carrying the given node roles. Requires every class to
  /// have at least one training node.
  Hypergraph with_roles(std::vector<NodeRole> roles) const;
  Hypergraph without_roles() const;

  /// All nodes grouped by class. Meant for building splits; every test node
  /// it touches counts as a test-label read.
  std::vector<std::vector<Index>> nodes_by_class() const;

  std::uint64_t test_label_reads() const { return audit_->load(); }
  void reset_label_audit() const { audit_->store(0); }

  /// The input hyperedges as member lists (self-loops excluded).
  std::vector<std::vector<Index>> input_edges() const;

 private:
  struct Data {
    Matrix features;
    std::vector<int> labels;
    int num_classes = 0;
    Index num_input_edges = 0;
    Index num_input_pins = 0;
    std::vector<Index> edge_offsets;
    std::vector<Index> edge_nodes;
    std::vector<Index> node_offsets;
    std::vector<Index> node_edges;
  };

  std::shared_ptr<const Data> data_;
  std::vector<NodeRole> roles_;
  std::shared_ptr<std::atomic<std::uint64_t>> audit_;
};

}  // namespace hypercondense
