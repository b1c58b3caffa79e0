#include "hypercondense/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "hypercondense/condenser.hpp"
#include "hypercondense/errors.hpp"

namespace hypercondense {

CoresetMethod parse_coreset_method(const std::string& name) {
  if (name == "random") return CoresetMethod::Random;
  if (name == "herding") return CoresetMethod::Herding;
  if (name == "kcenter") return CoresetMethod::KCenter;
  throw Error(ErrorCode::ConfigError, "method: unknown coreset method '" + name + "'");
}

std::string to_string(CoresetMethod m) {
  switch (m) {
    case CoresetMethod::Random: return "random";
    case CoresetMethod::Herding: return "herding";
    case CoresetMethod::KCenter: return "kcenter";
  }
  return "random";
}

std::vector<Index> herding_order(const Matrix& points, Index count) {
  const Index n = points.rows();
  const RowVector mean = points.colwise().mean();
  RowVector running = RowVector::Zero(points.cols());
  std::vector<bool> used(n, false);
  std::vector<Index> order;
  for (Index k = 1; k <= std::min(count, n); ++k) {
    Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double dist = ((running + points.row(i)) / static_cast<double>(k) - mean).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    used[best] = true;
    running += points.row(best);
    order.push_back(best);
  }
  return order;
}

std::vector<Index> kcenter_order(const Matrix& points, Index count) {
  const Index n = points.rows();
  std::vector<Index> order;
  if (n == 0 || count <= 0) return order;
  const RowVector mean = points.colwise().mean();
  Index first = 0;
  for (Index i = 1; i < n; ++i) {
    if ((points.row(i) - mean).squaredNorm() < (points.row(first) - mean).squaredNorm()) first = i;
  }
  Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Index pick = first;
  while (true) {
    order.push_back(pick);
    if (static_cast<Index>(order.size()) >= std::min(count, n)) break;
    for (Index i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], (points.row(i) - points.row(pick)).squaredNorm());
    Index far = -1;
    for (Index i = 0; i < n; ++i) {
      if (nearest[i] > 0.0 && (far < 0 || nearest[i] > nearest[far])) far = i;
    }
    if (far < 0) {  // remaining points coincide with chosen centres; take them in index order
      for (Index i = 0; i < n && static_cast<Index>(order.size()) < count; ++i) {
        if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
      }
      break;
    }
    pick = far;
  }
  return order;
}

std::vector<Index> select_coreset(const Hypergraph& h, const Matrix& diffused, double ratio, CoresetMethod method,
                                  Rng& rng) {
  const auto by_class = h.training_nodes_by_class();
  std::vector<std::int64_t> hist;
  for (const auto& nodes : by_class) hist.push_back(static_cast<std::int64_t>(nodes.size()));
  const auto total = static_cast<Index>(std::llround(ratio * static_cast<double>(h.num_nodes())));
  const auto quotas = allocate_synthetic(total, hist);

  std::vector<Index> selected;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const auto& pool = by_class[c];
    auto quota = static_cast<Index>(quotas[c]);
    if (quota > static_cast<Index>(pool.size())) {
      spdlog::warn("class {} has {} training nodes, below its quota {}; taking all", c, pool.size(), quota);
      quota = static_cast<Index>(pool.size());
    }
    if (method == CoresetMethod::Random) {
      for (std::size_t k : rng.sample_without_replacement(pool.size(), quota)) selected.push_back(pool[k]);
      continue;
    }
    Matrix points(static_cast<Index>(pool.size()), diffused.cols());
    for (std::size_t i = 0; i < pool.size(); ++i) points.row(static_cast<Index>(i)) = diffused.row(pool[i]);
    const auto order = method == CoresetMethod::Herding ? herding_order(points, quota) : kcenter_order(points, quota);
    for (Index k : order) selected.push_back(pool[k]);
  }
  return selected;
}

Hypergraph induced_subhypergraph(const Hypergraph& h, std::span<const Index> nodes) {
  std::unordered_map<Index, Index> local;
  Matrix features(static_cast<Index>(nodes.size()), h.num_features());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    local.emplace(nodes[i], static_cast<Index>(i));
    features.row(static_cast<Index>(i)) = h.features().row(nodes[i]);
  }
  std::vector<std::vector<Index>> edges;
  for (Index e = 0; e < h.num_input_edges(); ++e) {
    std::vector<Index> members;
    for (Index v : h.edge_members(e)) {
      if (auto it = local.find(v); it != local.end()) members.push_back(it->second);
    }
    if (!members.empty()) edges.push_back(std::move(members));
  }
  std::vector<int> labels = h.training_labels(nodes);
  Hypergraph sub(std::move(features), std::move(edges), std::move(labels), h.num_classes());
  return sub.with_roles(std::vector<NodeRole>(nodes.size(), NodeRole::Train));
}

}  // namespace hypercondense
