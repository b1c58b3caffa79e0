#include "hypercondense/adam.hpp"

#include <cmath>

#include "hypercondense/errors.hpp"

namespace hypercondense {

void Adam::step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adam: parameter and gradient counts differ");
  }
  if (m_.empty()) {
    for (const Matrix* p : params) {
      m_.push_back(Matrix::Zero(p->rows(), p->cols()));
      v_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (m_.size() != params.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adam: parameter group changed between steps");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    if (grads[i].rows() != p.rows() || grads[i].cols() != p.cols()) {
      throw Error(ErrorCode::ShapeMismatch, "adam: gradient shape differs from parameter");
    }
    Matrix g = grads[i];
    if (options_.weight_decay != 0.0) g += options_.weight_decay * p;
    m_[i] = options_.beta1 * m_[i] + (1.0 - options_.beta1) * g;
    v_[i] = options_.beta2 * v_[i] + (1.0 - options_.beta2) * g.cwiseProduct(g);
    p.array() -= options_.lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + options_.eps);
  }
}

}  // namespace hypercondense
