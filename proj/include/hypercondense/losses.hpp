#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hypercondense/config.hpp"
#include "hypercondense/matrix.hpp"
#include "hypercondense/rng.hpp"
#include "hypercondense/tape.hpp"

namespace hypercondense {

/// Row c = sum of the rows of `features` whose label is c (sums, not means).
Matrix class_prototypes(const Matrix& features, std::span<const int> labels, int num_classes);
ad::Var class_prototypes(const ad::Var& features, std::span<const int> labels, int num_classes);

/// sum_i (1 - cos(C_i, C'_i)) + sum_{i != j} cos(C_i, C'_j) over the C x C
/// grid. Throws DegeneratePrototype if any prototype row has zero norm.
ad::Var coarse_loss(const ad::Var& original, const ad::Var& synthetic);

/// Positive and negative original nodes drawn for each synthetic node.
struct ContrastiveDraw {
  std::vector<Index> positives;               // one per synthetic node
  std::vector<std::vector<Index>> negatives;  // N_neg per synthetic node
};

/// For synthetic node i: one positive uniformly from the training nodes of
/// class y'_i, and `num_negatives` from the training nodes of other classes,
/// without replacement when the pool is large enough (otherwise with
/// replacement, logged once).
ContrastiveDraw draw_contrastive(const std::vector<std::vector<Index>>& train_by_class,
                                 std::span<const int> synthetic_labels, int num_negatives, Rng& rng);

/// sum_i -log( exp(s_ip) / (exp(s_ip) + sum_q exp(s_iq)) ) with raw inner
/// products s between diffused synthetic rows and diffused original rows.
ad::Var fine_loss(const ad::Var& synthetic, const Matrix& original, const ContrastiveDraw& draw);

/// Per-sample fine loss terms for given similarity rows: column 0 holds the
/// positive score, the rest negatives. Plain helper used by the theory checks.
Vector contrastive_terms(const Matrix& scores);

/// (coarse weight, fine weight) at epoch t of T. Only the cosine schedule is
/// implemented; the other enum values throw ConfigError.
std::pair<double, double> schedule_weights(int t, int total, WeightSchedule schedule = WeightSchedule::Cosine);

}  // namespace hypercondense
