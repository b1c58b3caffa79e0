#pragma once

#include <vector>

#include "hypercondense/matrix.hpp"

namespace hypercondense {

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// L2 penalty folded into the gradient (coupled, not decoupled AdamW).
  double weight_decay = 0.0;
};

/// Adam with bias correction over a fixed, ordered parameter group.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  /// One update. params and grads are matched by position; the group layout
  /// must not change between calls.
  void step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads);

  long steps() const { return t_; }
  const AdamOptions& options() const { return options_; }

 private:
  AdamOptions options_;
  long t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

}  // namespace hypercondense
