#include "hypercondense/condenser.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hypercondense/adam.hpp"
#include "hypercondense/apportion.hpp"
#include "hypercondense/diffusion.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/losses.hpp"
#include "hypercondense/ops.hpp"
#include "hypercondense/propagation.hpp"

namespace hypercondense {

using ad::Var;

std::vector<std::int64_t> allocate_synthetic(Index total, const std::vector<std::int64_t>& class_counts) {
  const auto c = static_cast<Index>(class_counts.size());
  if (total < c) {
    throw Error(ErrorCode::TooFewSyntheticNodes, "N' = " + std::to_string(total) + " is below the " +
                                                     std::to_string(c) + " classes");
  }
  auto counts = apportion(total, class_counts, 1);
  if (counts.empty()) throw Error(ErrorCode::TooFewSyntheticNodes, "cannot allocate synthetic labels");
  return counts;
}

std::vector<int> synthesize_labels(const Hypergraph& h, double ratio) {
  const auto by_class = h.training_nodes_by_class();
  std::vector<std::int64_t> hist;
  for (const auto& nodes : by_class) hist.push_back(static_cast<std::int64_t>(nodes.size()));
  const auto total = static_cast<Index>(std::llround(ratio * static_cast<double>(h.num_nodes())));
  const auto counts = allocate_synthetic(total, hist);
  std::vector<int> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c));
  return labels;
}

Matrix init_features(const Hypergraph& h, const Matrix& diffused, std::span<const int> labels, int samples,
                     Rng& rng) {
  const auto by_class = h.training_nodes_by_class();
  Matrix out = Matrix::Zero(static_cast<Index>(labels.size()), diffused.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& pool = by_class.at(labels[i]);
    const auto row = static_cast<Index>(i);
    if (pool.size() >= static_cast<std::size_t>(samples)) {
      for (std::size_t k : rng.sample_without_replacement(pool.size(), samples)) out.row(row) += diffused.row(pool[k]);
    } else {
      for (int k = 0; k < samples; ++k) out.row(row) += diffused.row(pool[rng.uniform_index(pool.size())]);
    }
    out.row(row) /= static_cast<double>(samples);
  }
  return out;
}

ObjectiveTerms condensation_objective(const Var& features, const StructureVars& structure,
                                      const ObjectiveContext& ctx, const ContrastiveDraw& draw,
                                      double coarse_weight, double fine_weight) {
  ad::Tape& tape = features.tape();
  const Var incidence = generate_structure(features, structure);
  const Var propagation = condensed_propagation(incidence);
  const Var diffused = diffuse_on_tape(propagation, features, *ctx.weights);
  const Var synth_proto = class_prototypes(diffused, *ctx.labels, ctx.num_classes);
  ObjectiveTerms terms;
  terms.coarse = coarse_loss(tape.constant(*ctx.original_prototypes), synth_proto);
  terms.fine = fine_loss(diffused, *ctx.diffused, draw);
  terms.total = ad::scalar_mul(terms.coarse, coarse_weight) + ad::scalar_mul(terms.fine, fine_weight);
  return terms;
}

Matrix diffuse_original(const Hypergraph& h, const RunConfig& cfg) {
  return hkpr_diffuse(PropagationOperator(h), h.features(), poisson_weights(cfg.lambda, cfg.diffusion_order()));
}

Condensation condense(const Hypergraph& h, const Matrix& diffused, const RunConfig& cfg, int set_index,
                      const EpochHook& hook) {
  const CondenseOptions& opt = cfg.condense;
  schedule_weights(0, opt.epochs, opt.schedule);  // rejects unimplemented schedules up front
  if (diffused.rows() != h.num_nodes() || diffused.cols() != h.num_features()) {
    throw Error(ErrorCode::ShapeMismatch, "diffused features do not match the hypergraph");
  }
  const auto set = static_cast<std::uint64_t>(set_index);
  const auto by_class = h.training_nodes_by_class();
  const PoissonWeights weights = poisson_weights(cfg.lambda, cfg.diffusion_order());

  Condensation result;
  result.graph.num_classes = h.num_classes();
  result.graph.labels = synthesize_labels(h, cfg.ratio);
  const auto& labels = result.graph.labels;

  Rng feature_rng(cfg.seed, "init", set, 0);
  Matrix features = init_features(h, diffused, labels, opt.samples_per_node, feature_rng);
  Rng structure_rng(cfg.seed, "init", set, 1);
  StructureParams structure = init_structure_params(h.num_features(), static_cast<Index>(labels.size()),
                                                    opt.hidden, opt.threshold_init, structure_rng);

  std::vector<int> train_labels;
  std::vector<Index> train_nodes;
  for (int c = 0; c < h.num_classes(); ++c) {
    for (Index v : by_class[c]) {
      train_nodes.push_back(v);
      train_labels.push_back(c);
    }
  }
  Matrix train_diffused(static_cast<Index>(train_nodes.size()), diffused.cols());
  for (std::size_t i = 0; i < train_nodes.size(); ++i) train_diffused.row(static_cast<Index>(i)) = diffused.row(train_nodes[i]);
  const Matrix original_proto = class_prototypes(train_diffused, train_labels, h.num_classes());

  ObjectiveContext ctx;
  ctx.original_prototypes = &original_proto;
  ctx.diffused = &diffused;
  ctx.labels = &labels;
  ctx.weights = &weights;
  ctx.num_classes = h.num_classes();

  Adam feature_opt({.lr = opt.lr_features});
  Adam structure_opt({.lr = opt.lr_structure});
  const int cycle = opt.tau_features + opt.tau_structure;
  double last_finite = std::numeric_limits<double>::quiet_NaN();

  for (int t = 0; t < opt.epochs; ++t) {
    const bool update_features = (t % cycle) < opt.tau_features;
    const auto [wc, wf] = schedule_weights(t, opt.epochs, opt.schedule);
    Rng sampling(cfg.seed, "sampling", set, static_cast<std::uint64_t>(t));
    const ContrastiveDraw draw = draw_contrastive(by_class, labels, opt.negatives, sampling);

    ad::Tape tape;
    const Var x = update_features ? tape.variable(features) : tape.constant(features);
    const StructureVars sv = StructureVars::on_tape(tape, structure, !update_features);
    const ObjectiveTerms terms = condensation_objective(x, sv, ctx, draw, wc, wf);
    const double total = terms.total.scalar();
    if (!std::isfinite(total)) {
      throw Error(ErrorCode::NonFiniteLoss, "non-finite loss at epoch " + std::to_string(t) +
                                                "; last finite loss " + std::to_string(last_finite));
    }
    last_finite = total;
    result.trajectory.push_back({t, update_features, wc, wf, terms.coarse.scalar(), terms.fine.scalar(), total});

    tape.backward(terms.total);
    if (update_features) {
      feature_opt.step({&features}, {x.grad()});
    } else {
      std::vector<Matrix> grads;
      for (const Var& v : sv.all()) grads.push_back(v.grad());
      structure_opt.step(structure.tensors(), grads);
    }
    if (hook) hook(t, features, structure);
  }

  result.graph.features = features;
  result.graph.incidence = generate_structure_values(features, structure);
  result.structure = std::move(structure);
  return result;
}

Condensation condense(const Hypergraph& h, const RunConfig& cfg, int set_index) {
  return condense(h, diffuse_original(h, cfg), cfg, set_index);
}

}  // namespace hypercondense
