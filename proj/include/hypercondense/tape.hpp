#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "hypercondense/matrix.hpp"

namespace hypercondense::ad {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; only valid while the
/// tape is alive.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  /// Accumulated gradient; a zero matrix of the value's shape if none arrived.
  Matrix grad() const;
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }
  bool requires_grad() const;
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Define-by-run reverse-mode tape over dense double matrices.
///
/// Operations append nodes in execution order, so the recording order is a
/// topological order. backward() walks the recorded nodes in exact reverse
/// order and adds into input gradients, which makes fan-out accumulate.
/// A tape is single-threaded; build a fresh one per optimisation step.
class Tape {
 public:
  /// Receives the gradient flowing into the node; adds into its inputs.
  using BackwardFn = std::function<void(const Matrix& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  /// Leaf that receives gradients.
  Var variable(Matrix value);

  /// Records an op output. The node requires grad iff any input does; the
  /// backward rule is dropped otherwise.
  Var record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var record(Matrix value, const std::vector<Var>& inputs, BackwardFn backward);

  /// Adds `g` into the gradient of `target` (no-op when target needs none).
  void accumulate(const Var& target, const Matrix& g);

  /// Seeds d(loss)/d(loss) = 1 and propagates. Interior gradients are reset on
  /// entry; leaf gradients are not, so calling twice accumulates twice.
  /// Throws NonScalarLoss unless loss is 1x1 and lives on this tape.
  void backward(const Var& loss);

  /// Clears all gradients, leaves included.
  void zero_grad();

  std::size_t size() const { return nodes_.size(); }

 private:
  friend class Var;

  struct Node {
    Matrix value;
    Matrix grad;  // empty until something flows in
    bool requires_grad = false;
    bool leaf = false;
    BackwardFn backward;
  };

  Var push(Node node);

  std::deque<Node> nodes_;
};

}  // namespace hypercondense::ad
