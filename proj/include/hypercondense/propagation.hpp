#pragma once

#include "hypercondense/hypergraph.hpp"
#include "hypercondense/matrix.hpp"

namespace hypercondense {

/// Symmetric normalised propagation P = Dv^-1/2 H De^-1 H^T Dv^-1/2.
///
/// apply() never forms P: it pushes features node -> edge -> node through the
/// incidence lists, costing O(sum |e| * d). materialize() builds the explicit
/// sparse matrix, whose (u, v) and (v, u) entries are accumulated in the same
/// edge order and are therefore bit-identical.
class PropagationOperator {
 public:
  explicit PropagationOperator(const Hypergraph& h);

  Index size() const { return graph_.num_nodes(); }
  Matrix apply(const Matrix& x) const;
  Matrix operator()(const Matrix& x) const { return apply(x); }
  SparseMatrix materialize() const;

  /// Dv^-1/2 diagonal, exposed for invariant checks (P * sqrt(d_v) = sqrt(d_v)).
  const Vector& inv_sqrt_node_degree() const { return inv_sqrt_dv_; }

 private:
  Hypergraph graph_;
  Vector inv_sqrt_dv_;
  Vector inv_de_;
};

SparseMatrix propagation_matrix(const Hypergraph& h);

}  // namespace hypercondense
