#include "hypercondense/structure_generator.hpp"

#include <cmath>

#include "hypercondense/ops.hpp"

namespace hypercondense {

using ad::Var;

std::vector<Matrix*> StructureParams::tensors() {
  return {&w1_anchor, &w1_member, &b1, &w2, &b2, &w3, &b3, &threshold};
}

std::vector<const Matrix*> StructureParams::tensors() const {
  return {&w1_anchor, &w1_member, &b1, &w2, &b2, &w3, &b3, &threshold};
}

namespace {

Matrix uniform_matrix(Index rows, Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  }
  return m;
}

}  // namespace

StructureParams init_structure_params(Index num_features, Index num_nodes, int hidden,
                                      double threshold_init, Rng& rng) {
  StructureParams p;
  const double a1 = 1.0 / std::sqrt(2.0 * static_cast<double>(num_features));
  const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  p.w1_anchor = uniform_matrix(num_features, hidden, a1, rng);
  p.w1_member = uniform_matrix(num_features, hidden, a1, rng);
  p.b1 = uniform_matrix(1, hidden, a1, rng);
  p.w2 = uniform_matrix(hidden, hidden, a2, rng);
  p.b2 = uniform_matrix(1, hidden, a2, rng);
  p.w3 = uniform_matrix(hidden, 1, a2, rng);
  p.b3 = uniform_matrix(1, 1, a2, rng);
  p.threshold = Matrix::Constant(num_nodes, 1, threshold_init);
  return p;
}

StructureVars StructureVars::on_tape(ad::Tape& tape, const StructureParams& p, bool trainable) {
  auto make = [&](const Matrix& m) { return trainable ? tape.variable(m) : tape.constant(m); };
  return {make(p.w1_anchor), make(p.w1_member), make(p.b1), make(p.w2),
          make(p.b2),        make(p.w3),        make(p.b3), make(p.threshold)};
}

std::vector<Var> StructureVars::all() const { return {w1_anchor, w1_member, b1, w2, b2, w3, b3, threshold}; }

Var pair_scores(const Var& x, const StructureVars& p) {
  const Index n = x.rows();
  std::vector<Index> anchor(n * n), member(n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      anchor[i * n + j] = i;
      member[i * n + j] = j;
    }
  }
  const Var a = ad::matmul(x, p.w1_anchor);
  const Var b = ad::matmul(x, p.w1_member);
  Var h = ad::add(ad::gather_rows(a, anchor) + ad::gather_rows(b, member), p.b1);
  h = ad::relu(h);
  h = ad::relu(ad::add(ad::matmul(h, p.w2), p.b2));
  const Var logits = ad::add(ad::matmul(h, p.w3), p.b3);
  return ad::reshape(ad::sigmoid(logits), n, n);
}

Var threshold_scores(const Var& scores, const Var& threshold) {
  ad::Tape& tape = scores.tape();
  const Index n = scores.rows();
  const Var spread = ad::matmul(threshold, tape.constant(Matrix::Ones(1, scores.cols())));
  const Var kept = ad::relu(scores - spread);

  Matrix fallback = Matrix::Zero(n, n);
  bool any = false;
  for (Index i = 0; i < n; ++i) {
    if ((kept.value().row(i).array() > 0.0).any()) continue;
    fallback(i, i) = 1.0;
    any = true;
  }
  if (!any) return kept;
  return kept + ad::elementwise_mul(scores, tape.constant(std::move(fallback)));
}

Var generate_structure(const Var& x, const StructureVars& p) { return threshold_scores(pair_scores(x, p), p.threshold); }

Var condensed_propagation(const Var& incidence) {
  const Var edge_scale = ad::rsqrt(ad::row_sums(incidence));
  const Var node_scale = ad::rsqrt(ad::column_sums(incidence));
  const Var f = ad::elementwise_mul(ad::scale_rows(incidence, edge_scale), node_scale);
  return ad::matmul(ad::transpose(f), f);
}

Var diffuse_on_tape(const Var& p, const Var& x, const PoissonWeights& w) {
  Var acc = ad::scalar_mul(x, w.weights[0]);
  Var v = x;
  for (int k = 1; k <= w.order; ++k) {
    v = ad::matmul(p, v);
    acc = acc + ad::scalar_mul(v, w.weights[k]);
  }
  return acc;
}

Matrix generate_structure_values(const Matrix& x, const StructureParams& p) {
  ad::Tape tape;
  const StructureVars vars = StructureVars::on_tape(tape, p, false);
  return generate_structure(tape.constant(x), vars).value();
}

Matrix condensed_propagation_values(const Matrix& incidence) {
  ad::Tape tape;
  return condensed_propagation(tape.constant(incidence)).value();
}

}  // namespace hypercondense
