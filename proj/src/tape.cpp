#include "hypercondense/tape.hpp"

#include <cassert>
#include <string>

#include "hypercondense/errors.hpp"

namespace hypercondense::ad {

const Matrix& Var::value() const { return tape_->nodes_[id_].value; }

Matrix Var::grad() const {
  const auto& node = tape_->nodes_[id_];
  if (node.grad.size() == 0) return Matrix::Zero(node.value.rows(), node.value.cols());
  return node.grad;
}

bool Var::requires_grad() const { return tape_->nodes_[id_].requires_grad; }

Var Tape::push(Node node) {
  assert(node.value.allFinite() && "forward op produced a non-finite value");
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  Node node;
  node.value = std::move(value);
  node.leaf = true;
  return push(std::move(node));
}

Var Tape::variable(Matrix value) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = true;
  node.leaf = true;
  return push(std::move(node));
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (const Var& in : inputs) {
    assert(in.tape_ == this);
    node.requires_grad = node.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return push(std::move(node));
}

Var Tape::record(Matrix value, const std::vector<Var>& inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (const Var& in : inputs) {
    assert(in.tape_ == this);
    node.requires_grad = node.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  return push(std::move(node));
}

void Tape::accumulate(const Var& target, const Matrix& g) {
  Node& node = nodes_[target.id_];
  if (!node.requires_grad) return;
  if (node.grad.size() == 0) {
    node.grad = g;
  } else {
    node.grad += g;
  }
}

void Tape::backward(const Var& loss) {
  if (loss.tape_ != this) throw Error(ErrorCode::NonScalarLoss, "loss was recorded on another tape");
  const Matrix& value = nodes_[loss.id_].value;
  if (value.rows() != 1 || value.cols() != 1) {
    throw Error(ErrorCode::NonScalarLoss, "loss has shape " + std::to_string(value.rows()) + "x" +
                                              std::to_string(value.cols()));
  }
  for (Node& node : nodes_) {
    if (!node.leaf) node.grad.resize(0, 0);
  }
  accumulate(loss, Matrix::Ones(1, 1));
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.leaf || !node.backward || node.grad.size() == 0) continue;
    node.backward(node.grad);
  }
}

void Tape::zero_grad() {
  for (Node& node : nodes_) node.grad.resize(0, 0);
}

}  // namespace hypercondense::ad
