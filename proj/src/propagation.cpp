#include "hypercondense/propagation.hpp"

#include <cmath>
#include <map>
#include <string>

#include "hypercondense/errors.hpp"

namespace hypercondense {

PropagationOperator::PropagationOperator(const Hypergraph& h) : graph_(h) {
  const DegreePair deg = h.degrees();
  inv_sqrt_dv_.resize(deg.node.size());
  inv_de_.resize(deg.edge.size());
  for (Index e = 0; e < deg.edge.size(); ++e) {
    if (deg.edge[e] <= 0) {
      throw Error(ErrorCode::DegenerateDegree, "edge " + std::to_string(e) + " has zero degree");
    }
    inv_de_[e] = 1.0 / deg.edge[e];
  }
  for (Index v = 0; v < deg.node.size(); ++v) {
    if (deg.node[v] <= 0) {
      throw Error(ErrorCode::DegenerateDegree, "node " + std::to_string(v) + " has zero degree");
    }
    inv_sqrt_dv_[v] = 1.0 / std::sqrt(deg.node[v]);
  }
}

Matrix PropagationOperator::apply(const Matrix& x) const {
  if (x.rows() != size()) {
    throw Error(ErrorCode::ShapeMismatch, "P is " + std::to_string(size()) + "x" +
                                              std::to_string(size()) + ", X has " +
                                              std::to_string(x.rows()) + " rows");
  }
  const Matrix scaled = inv_sqrt_dv_.asDiagonal() * x;
  Matrix edge_sum = Matrix::Zero(graph_.num_edges(), x.cols());
  for (Index e = 0; e < graph_.num_edges(); ++e) {
    for (Index v : graph_.edge_members(e)) edge_sum.row(e) += scaled.row(v);
    edge_sum.row(e) *= inv_de_[e];
  }
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (Index v = 0; v < size(); ++v) {
    for (Index e : graph_.node_edges(v)) out.row(v) += edge_sum.row(e);
    out.row(v) *= inv_sqrt_dv_[v];
  }
  return out;
}

SparseMatrix PropagationOperator::materialize() const {
  const Index n = size();
  SparseMatrix p(n, n);
  std::vector<Eigen::Triplet<double>> entries;
  std::map<Index, double> row;
  for (Index u = 0; u < n; ++u) {
    row.clear();
    for (Index e : graph_.node_edges(u)) {
      for (Index v : graph_.edge_members(e)) {
        row[v] += inv_de_[e] * (inv_sqrt_dv_[u] * inv_sqrt_dv_[v]);
      }
    }
    for (const auto& [v, value] : row) entries.emplace_back(u, v, value);
  }
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

SparseMatrix propagation_matrix(const Hypergraph& h) { return PropagationOperator(h).materialize(); }

}  // namespace hypercondense
