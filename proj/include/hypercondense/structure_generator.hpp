#pragma once

#include <cstdint>
#include <vector>

#include "hypercondense/diffusion.hpp"
#include "hypercondense/matrix.hpp"
#include "hypercondense/rng.hpp"
#include "hypercondense/tape.hpp"

namespace hypercondense {

/// Pairwise membership scorer plus one threshold per anchor.
///
/// The first layer acts on [x_i ; x_j]; it is stored as two d x h halves so
/// the per-node products can be computed once and gathered per pair, which is
/// the same function as the concatenated layer at a fraction of the cost.
struct StructureParams {
  Matrix w1_anchor;  // d x h, multiplies x_i
  Matrix w1_member;  // d x h, multiplies x_j
  Matrix b1;         // 1 x h
  Matrix w2;         // h x h
  Matrix b2;         // 1 x h
  Matrix w3;         // h x 1
  Matrix b3;         // 1 x 1
  Matrix threshold;  // N' x 1

  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases, with fan_in
/// 2d for the first layer; thresholds start at `threshold_init`.
StructureParams init_structure_params(Index num_features, Index num_nodes, int hidden,
                                      double threshold_init, Rng& rng);

/// Tape handles for StructureParams, trainable or frozen as a group.
struct StructureVars {
  ad::Var w1_anchor, w1_member, b1, w2, b2, w3, b3, threshold;

  static StructureVars on_tape(ad::Tape& tape, const StructureParams& p, bool trainable);
  std::vector<ad::Var> all() const;
};

/// Raw scores sigmoid(MLP([x_i ; x_j])) as an N' x N' matrix, row = anchor i.
ad::Var pair_scores(const ad::Var& x, const StructureVars& p);

/// relu(scores - threshold_i) per row i; a row left empty keeps its anchor's
/// own raw score on the diagonal so the hyperedge is never empty and
/// gradients still reach it. `threshold` is N' x 1.
ad::Var threshold_scores(const ad::Var& scores, const ad::Var& threshold);

/// Weighted incidence H' (rows = anchor hyperedges, columns = member nodes):
/// threshold_scores applied to pair_scores.
ad::Var generate_structure(const ad::Var& x, const StructureVars& p);

/// Symmetric propagation over a weighted incidence in the orientation above:
/// node degrees are column sums, hyperedge degrees row sums, and the result is
/// Dv^-1/2 H'^T De^-1 H' Dv^-1/2 with eps-guarded inverse square roots.
ad::Var condensed_propagation(const ad::Var& incidence);

/// sum_k w_k P^k X on the tape, k ascending.
ad::Var diffuse_on_tape(const ad::Var& p, const ad::Var& x, const PoissonWeights& w);

/// Untaped helpers for producing final artifacts.
Matrix generate_structure_values(const Matrix& x, const StructureParams& p);
Matrix condensed_propagation_values(const Matrix& incidence);

}  // namespace hypercondense
