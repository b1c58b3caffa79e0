#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hypercondense/config.hpp"
#include "hypercondense/hypergraph.hpp"
#include "hypercondense/matrix.hpp"

namespace hypercondense {

/// Two-layer HGNN: logits = P relu(P X W1 + b1) W2 + b2, with dropout on the
/// hidden activations at train time.
struct HgnnModel {
  Matrix w1;  // d x h
  Matrix b1;  // 1 x h
  Matrix w2;  // h x C
  Matrix b2;  // 1 x C
};

/// The data an HGNN is fitted on: a propagation operator, features, and the
/// rows that act as labelled training examples.
struct TrainingSet {
  std::shared_ptr<const SparseMatrix> propagation;
  std::shared_ptr<const SparseMatrix> features;
  std::vector<Index> rows;
  std::vector<int> labels;
  int num_classes = 0;
};

/// Every node of a condensed or coreset graph is a training example.
TrainingSet training_set(const Matrix& propagation, const Matrix& features, std::vector<int> labels,
                         int num_classes);
/// Full-data training on the training split of h.
TrainingSet training_set(const Hypergraph& h);

/// The original hypergraph as seen by model selection and testing.
struct EvalTarget {
  std::shared_ptr<const SparseMatrix> propagation;
  std::shared_ptr<const SparseMatrix> features;
  std::vector<Index> val_nodes;
  std::vector<int> val_labels;
  Hypergraph graph;  // test labels are read from here, through the audited accessor

  explicit EvalTarget(const Hypergraph& h);
};

Matrix hgnn_logits(const HgnnModel& model, const SparseMatrix& propagation, const SparseMatrix& features);

/// Fraction of `nodes` whose argmax logit (lowest index on ties) matches.
double accuracy(const Matrix& logits, const std::vector<Index>& nodes, const std::vector<int>& labels);

struct HgnnFit {
  HgnnModel model;  // weights from the best validation epoch
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
  int epochs_run = 0;
};

/// Adam on mean cross-entropy over the training rows, early stopping on the
/// target's validation accuracy (strict improvement, `patience` epochs).
HgnnFit train_hgnn(const TrainingSet& data, const EvalTarget& target, const EvalOptions& opt,
                   std::uint64_t seed);

/// Test accuracy on the original hypergraph.
double evaluate(const HgnnModel& model, const EvalTarget& target);

/// Loss of one training step on its own tape, for gradient checks: returns the
/// scalar cross-entropy at the given model and dropout mask.
double hgnn_loss(const HgnnModel& model, const TrainingSet& data, const Matrix& dropout_mask,
                 HgnnModel* grads);

}  // namespace hypercondense
