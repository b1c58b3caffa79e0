#include "hypercondense/hypergraph.hpp"

#include <algorithm>
#include <string>

#include "hypercondense/errors.hpp"

namespace hypercondense {

Hypergraph::Hypergraph(Matrix features, std::vector<std::vector<Index>> edges,
                       std::vector<int> labels, int num_classes)
    : audit_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  const Index n = static_cast<Index>(labels.size());
  if (features.rows() != n) {
    throw Error(ErrorCode::InconsistentDimensions,
                "features have " + std::to_string(features.rows()) + " rows but there are " +
                    std::to_string(n) + " labels");
  }
  if (n == 0) throw Error(ErrorCode::InconsistentDimensions, "hypergraph has no nodes");

  int max_label = -1;
  for (Index v = 0; v < n; ++v) {
    if (labels[v] < 0) {
      throw Error(ErrorCode::LabelOutOfRange,
                  "node " + std::to_string(v) + " has negative label " + std::to_string(labels[v]));
    }
    max_label = std::max(max_label, labels[v]);
  }
  if (num_classes <= 0) num_classes = max_label + 1;
  if (max_label >= num_classes) {
    const auto it = std::find(labels.begin(), labels.end(), max_label);
    throw Error(ErrorCode::LabelOutOfRange,
                "node " + std::to_string(it - labels.begin()) + " has label " +
                    std::to_string(max_label) + " outside [0," + std::to_string(num_classes) + ")");
  }

  auto data = std::make_shared<Data>();
  data->num_classes = num_classes;
  data->num_input_edges = static_cast<Index>(edges.size());

  std::vector<char> covered(n, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto& members = edges[e];
    if (members.empty()) {
      throw Error(ErrorCode::EmptyHyperedge, "edge " + std::to_string(e) + " has no members");
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (Index v : members) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::NodeOutOfRange, "edge " + std::to_string(e) + " references node " +
                                                   std::to_string(v) + " but N=" +
                                                   std::to_string(n));
      }
      covered[v] = 1;
    }
    data->num_input_pins += static_cast<Index>(members.size());
  }
  for (Index v = 0; v < n; ++v) {
    if (!covered[v]) edges.push_back({v});
  }

  const Index m = static_cast<Index>(edges.size());
  data->edge_offsets.reserve(m + 1);
  data->edge_offsets.push_back(0);
  std::vector<Index> degree(n, 0);
  for (const auto& members : edges) {
    data->edge_nodes.insert(data->edge_nodes.end(), members.begin(), members.end());
    data->edge_offsets.push_back(static_cast<Index>(data->edge_nodes.size()));
    for (Index v : members) ++degree[v];
  }
  data->node_offsets.assign(n + 1, 0);
  for (Index v = 0; v < n; ++v) data->node_offsets[v + 1] = data->node_offsets[v] + degree[v];
  data->node_edges.resize(data->edge_nodes.size());
  std::vector<Index> cursor(data->node_offsets.begin(), data->node_offsets.end() - 1);
  for (Index e = 0; e < m; ++e) {
    for (Index k = data->edge_offsets[e]; k < data->edge_offsets[e + 1]; ++k) {
      data->node_edges[cursor[data->edge_nodes[k]]++] = e;
    }
  }

  data->features = std::move(features);
  data->labels = std::move(labels);
  data_ = std::move(data);
}

std::span<const Index> Hypergraph::edge_members(Index e) const {
  const auto& d = *data_;
  return {d.edge_nodes.data() + d.edge_offsets[e],
          static_cast<std::size_t>(d.edge_offsets[e + 1] - d.edge_offsets[e])};
}

std::span<const Index> Hypergraph::node_edges(Index v) const {
  const auto& d = *data_;
  return {d.node_edges.data() + d.node_offsets[v],
          static_cast<std::size_t>(d.node_offsets[v + 1] - d.node_offsets[v])};
}

DegreePair Hypergraph::degrees() const {
  DegreePair out{Vector(num_nodes()), Vector(num_edges())};
  for (Index v = 0; v < num_nodes(); ++v) out.node[v] = static_cast<double>(node_degree(v));
  for (Index e = 0; e < num_edges(); ++e) out.edge[e] = static_cast<double>(edge_size(e));
  return out;
}

int Hypergraph::label(Index v) const {
  if (!roles_.empty() && roles_[v] == NodeRole::Test) audit_->fetch_add(1);
  return data_->labels[v];
}

std::vector<Index> Hypergraph::nodes_with_role(NodeRole r) const {
  std::vector<Index> out;
  for (Index v = 0; v < num_nodes(); ++v) {
    if (role(v) == r) out.push_back(v);
  }
  return out;
}

std::vector<bool> Hypergraph::mask(NodeRole r) const {
  std::vector<bool> out(num_nodes());
  for (Index v = 0; v < num_nodes(); ++v) out[v] = role(v) == r;
  return out;
}

std::vector<std::vector<Index>> Hypergraph::training_nodes_by_class() const {
  std::vector<std::vector<Index>> out(num_classes());
  for (Index v = 0; v < num_nodes(); ++v) {
    if (role(v) == NodeRole::Train) out[data_->labels[v]].push_back(v);
  }
  return out;
}

std::vector<int> Hypergraph::training_labels(std::span<const Index> nodes) const {
  std::vector<int> out;
  out.reserve(nodes.size());
  for (Index v : nodes) {
    if (role(v) != NodeRole::Train) {
      throw Error(ErrorCode::InconsistentDimensions,
                  "node " + std::to_string(v) + " is not a training node");
    }
    out.push_back(data_->labels[v]);
  }
  return out;
}

Hypergraph Hypergraph::with_roles(std::vector<NodeRole> roles) const {
  if (static_cast<Index>(roles.size()) != num_nodes()) {
    throw Error(ErrorCode::InconsistentDimensions, "role vector length " +
                                                       std::to_string(roles.size()) +
                                                       " does not match N=" +
                                                       std::to_string(num_nodes()));
  }
  std::vector<int> train_count(num_classes(), 0);
  for (Index v = 0; v < num_nodes(); ++v) {
    if (roles[v] == NodeRole::Train) ++train_count[data_->labels[v]];
  }
  for (int c = 0; c < num_classes(); ++c) {
    if (train_count[c] == 0) {
      throw Error(ErrorCode::MissingTrainingClass,
                  "class " + std::to_string(c) + " has no training node");
    }
  }
  Hypergraph out = *this;
  out.roles_ = std::move(roles);
  return out;
}

Hypergraph Hypergraph::without_roles() const {
  Hypergraph out = *this;
  out.roles_.clear();
  return out;
}

std::vector<std::vector<Index>> Hypergraph::nodes_by_class() const {
  std::vector<std::vector<Index>> out(num_classes());
  for (Index v = 0; v < num_nodes(); ++v) {
    if (role(v) == NodeRole::Test) audit_->fetch_add(1);
    out[data_->labels[v]].push_back(v);
  }
  return out;
}

std::vector<std::vector<Index>> Hypergraph::input_edges() const {
  std::vector<std::vector<Index>> out;
  out.reserve(num_input_edges());
  for (Index e = 0; e < num_input_edges(); ++e) {
    auto members = edge_members(e);
    out.emplace_back(members.begin(), members.end());
  }
  return out;
}

}  // namespace hypercondense
