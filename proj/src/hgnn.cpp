#include "hypercondense/hgnn.hpp"

#include <cmath>
#include <string>

#include "hypercondense/adam.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/ops.hpp"
#include "hypercondense/propagation.hpp"
#include "hypercondense/rng.hpp"

namespace hypercondense {

using ad::Var;

namespace {

std::shared_ptr<const SparseMatrix> share_sparse(const Matrix& m) {
  return std::make_shared<const SparseMatrix>(m.sparseView(0.0, 0.0));
}

Matrix glorot(Index rows, Index cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  }
  return m;
}

Matrix one_hot(const std::vector<int>& labels, int num_classes) {
  Matrix m = Matrix::Zero(static_cast<Index>(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) m(static_cast<Index>(i), labels[i]) = 1.0;
  return m;
}

struct ModelVars {
  Var w1, b1, w2, b2;
};

Var forward_loss(const ModelVars& m, const TrainingSet& data, const Matrix& dropout_mask) {
  ad::Tape& tape = m.w1.tape();
  Var h = ad::spmm(data.propagation, ad::spmm(data.features, m.w1));
  h = ad::relu(ad::add(h, m.b1));
  h = ad::elementwise_mul(h, tape.constant(dropout_mask));
  Var z = ad::add(ad::spmm(data.propagation, ad::matmul(h, m.w2)), m.b2);
  z = ad::gather_rows(z, data.rows);
  const Var picked = ad::row_sums(ad::elementwise_mul(z, tape.constant(one_hot(data.labels, data.num_classes))));
  const double scale = 1.0 / static_cast<double>(data.rows.size());
  return ad::scalar_mul(ad::reduce_sum(ad::logsumexp(z) - picked), scale);
}

ModelVars on_tape(ad::Tape& tape, const HgnnModel& model) {
  return {tape.variable(model.w1), tape.variable(model.b1), tape.variable(model.w2), tape.variable(model.b2)};
}

}  // namespace

TrainingSet training_set(const Matrix& propagation, const Matrix& features, std::vector<int> labels,
                         int num_classes) {
  if (propagation.rows() != features.rows() || static_cast<Index>(labels.size()) != features.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "training set: operator, features and labels disagree");
  }
  TrainingSet t;
  t.propagation = share_sparse(propagation);
  t.features = share_sparse(features);
  t.rows.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) t.rows[i] = static_cast<Index>(i);
  t.labels = std::move(labels);
  t.num_classes = num_classes;
  return t;
}

TrainingSet training_set(const Hypergraph& h) {
  TrainingSet t;
  t.propagation = std::make_shared<const SparseMatrix>(propagation_matrix(h));
  t.features = share_sparse(h.features());
  t.rows = h.nodes_with_role(NodeRole::Train);
  t.labels = h.training_labels(t.rows);
  t.num_classes = h.num_classes();
  return t;
}

EvalTarget::EvalTarget(const Hypergraph& h) : graph(h) {
  propagation = std::make_shared<const SparseMatrix>(propagation_matrix(h));
  features = share_sparse(h.features());
  val_nodes = h.nodes_with_role(NodeRole::Val);
  val_labels.reserve(val_nodes.size());
  for (Index v : val_nodes) val_labels.push_back(h.label(v));
}

Matrix hgnn_logits(const HgnnModel& model, const SparseMatrix& propagation, const SparseMatrix& features) {
  Matrix xw = features * model.w1;
  Matrix h = propagation * xw;
  h = (h.rowwise() + model.b1.row(0)).cwiseMax(0.0);
  Matrix hw = h * model.w2;
  Matrix z = propagation * hw;
  return z.rowwise() + model.b2.row(0);
}

double accuracy(const Matrix& logits, const std::vector<Index>& nodes, const std::vector<int>& labels) {
  if (nodes.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Index best = 0;
    const auto row = logits.row(nodes[k]);
    for (Index c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    if (best == labels[k]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

double hgnn_loss(const HgnnModel& model, const TrainingSet& data, const Matrix& dropout_mask, HgnnModel* grads) {
  ad::Tape tape;
  const ModelVars vars = on_tape(tape, model);
  const Var loss = forward_loss(vars, data, dropout_mask);
  if (grads) {
    tape.backward(loss);
    *grads = {vars.w1.grad(), vars.b1.grad(), vars.w2.grad(), vars.b2.grad()};
  }
  return loss.scalar();
}

HgnnFit train_hgnn(const TrainingSet& data, const EvalTarget& target, const EvalOptions& opt, std::uint64_t seed) {
  if (data.features->cols() != target.features->cols()) {
    throw Error(ErrorCode::ShapeMismatch, "training features have " + std::to_string(data.features->cols()) +
                                              " columns, target has " + std::to_string(target.features->cols()));
  }
  Rng init(seed, "hgnn-init");
  HgnnModel model;
  model.w1 = glorot(data.features->cols(), opt.hidden, init);
  model.b1 = Matrix::Zero(1, opt.hidden);
  model.w2 = glorot(opt.hidden, data.num_classes, init);
  model.b2 = Matrix::Zero(1, data.num_classes);

  Adam adam({.lr = opt.lr, .weight_decay = opt.weight_decay});
  Rng dropout(seed, "hgnn-dropout");
  const double keep = 1.0 - opt.dropout;
  const Index n = data.features->rows();

  HgnnFit fit;
  fit.model = model;
  fit.best_val_accuracy = -1.0;
  int since_best = 0;
  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    Matrix mask(n, opt.hidden);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < opt.hidden; ++j) mask(i, j) = dropout.uniform01() < keep ? 1.0 / keep : 0.0;
    }
    ad::Tape tape;
    const ModelVars vars = on_tape(tape, model);
    const Var loss = forward_loss(vars, data, mask);
    if (!std::isfinite(loss.scalar())) {
      throw Error(ErrorCode::NonFiniteLoss, "HGNN loss became non-finite at epoch " + std::to_string(epoch));
    }
    tape.backward(loss);
    adam.step({&model.w1, &model.b1, &model.w2, &model.b2},
              {vars.w1.grad(), vars.b1.grad(), vars.w2.grad(), vars.b2.grad()});
    fit.epochs_run = epoch + 1;

    const Matrix logits = hgnn_logits(model, *target.propagation, *target.features);
    const double val = accuracy(logits, target.val_nodes, target.val_labels);
    if (val > fit.best_val_accuracy) {
      fit.best_val_accuracy = val;
      fit.best_epoch = epoch;
      fit.model = model;
      since_best = 0;
    } else if (++since_best >= opt.patience) {
      break;
    }
  }
  return fit;
}

double evaluate(const HgnnModel& model, const EvalTarget& target) {
  const Matrix logits = hgnn_logits(model, *target.propagation, *target.features);
  const auto test = target.graph.nodes_with_role(NodeRole::Test);
  std::vector<int> labels;
  labels.reserve(test.size());
  for (Index v : test) labels.push_back(target.graph.label(v));
  return accuracy(logits, test, labels);
}

}  // namespace hypercondense
