#include "hypercondense/ops.hpp"

#include <cmath>
#include <string>

#include "hypercondense/errors.hpp"

namespace hypercondense::ad {

namespace {

std::string shape(const Var& v) { return std::to_string(v.rows()) + "x" + std::to_string(v.cols()); }

[[noreturn]] void mismatch(const char* op, const Var& a, const Var& b) {
  throw Error(ErrorCode::ShapeMismatch, std::string(op) + ": " + shape(a) + " vs " + shape(b));
}

/// True when b is a row vector broadcast against a; throws if incompatible.
bool check_broadcast(const char* op, const Var& a, const Var& b) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return false;
  if (b.rows() == 1 && b.cols() == a.cols()) return true;
  mismatch(op, a, b);
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  if (a.cols() != b.rows()) mismatch("matmul", a, b);
  Matrix out = a.value() * b.value();
  return a.tape().record(std::move(out), {a, b}, [a, b](const Matrix& g) {
    Tape& t = a.tape();
    if (a.requires_grad()) t.accumulate(a, g * b.value().transpose());
    if (b.requires_grad()) t.accumulate(b, a.value().transpose() * g);
  });
}

Var spmm(std::shared_ptr<const SparseMatrix> s, const Var& x) {
  if (s->cols() != x.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "spmm: " + std::to_string(s->rows()) + "x" +
                                              std::to_string(s->cols()) + " vs " + shape(x));
  }
  Matrix out = (*s) * x.value();
  return x.tape().record(std::move(out), {x}, [s, x](const Matrix& g) {
    x.tape().accumulate(x, s->transpose() * g);
  });
}

Var add(const Var& a, const Var& b) {
  const bool bc = check_broadcast("add", a, b);
  Matrix out = bc ? Matrix(a.value().rowwise() + b.value().row(0)) : Matrix(a.value() + b.value());
  return a.tape().record(std::move(out), {a, b}, [a, b, bc](const Matrix& g) {
    Tape& t = a.tape();
    t.accumulate(a, g);
    if (b.requires_grad()) t.accumulate(b, bc ? Matrix(g.colwise().sum()) : g);
  });
}

Var sub(const Var& a, const Var& b) {
  const bool bc = check_broadcast("sub", a, b);
  Matrix out = bc ? Matrix(a.value().rowwise() - b.value().row(0)) : Matrix(a.value() - b.value());
  return a.tape().record(std::move(out), {a, b}, [a, b, bc](const Matrix& g) {
    Tape& t = a.tape();
    t.accumulate(a, g);
    if (b.requires_grad()) t.accumulate(b, bc ? Matrix(-g.colwise().sum()) : Matrix(-g));
  });
}

Var scalar_mul(const Var& a, double s) {
  return a.tape().record(a.value() * s, {a}, [a, s](const Matrix& g) { a.tape().accumulate(a, g * s); });
}

Var add_scalar(const Var& a, double s) {
  Matrix out = a.value().array() + s;
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) { a.tape().accumulate(a, g); });
}

Var elementwise_mul(const Var& a, const Var& b) {
  const bool bc = check_broadcast("elementwise_mul", a, b);
  Matrix out = bc ? Matrix(a.value().array().rowwise() * b.value().row(0).array())
                  : Matrix(a.value().cwiseProduct(b.value()));
  return a.tape().record(std::move(out), {a, b}, [a, b, bc](const Matrix& g) {
    Tape& t = a.tape();
    if (a.requires_grad()) {
      t.accumulate(a, bc ? Matrix(g.array().rowwise() * b.value().row(0).array())
                         : Matrix(g.cwiseProduct(b.value())));
    }
    if (b.requires_grad()) {
      Matrix gb = g.cwiseProduct(a.value());
      t.accumulate(b, bc ? Matrix(gb.colwise().sum()) : gb);
    }
  });
}

Var scale_rows(const Var& a, const Var& v) {
  if (v.cols() != 1 || v.rows() != a.rows()) mismatch("scale_rows", a, v);
  Matrix out = v.value().col(0).asDiagonal() * a.value();
  return a.tape().record(std::move(out), {a, v}, [a, v](const Matrix& g) {
    Tape& t = a.tape();
    if (a.requires_grad()) t.accumulate(a, v.value().col(0).asDiagonal() * g);
    if (v.requires_grad()) t.accumulate(v, g.cwiseProduct(a.value()).rowwise().sum());
  });
}

Var concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error(ErrorCode::ShapeMismatch, "concat_rows: no inputs");
  Index rows = 0;
  for (const Var& p : parts) {
    if (p.cols() != parts[0].cols()) mismatch("concat_rows", parts[0], p);
    rows += p.rows();
  }
  Matrix out(rows, parts[0].cols());
  Index offset = 0;
  for (const Var& p : parts) {
    out.middleRows(offset, p.rows()) = p.value();
    offset += p.rows();
  }
  return parts[0].tape().record(std::move(out), parts, [parts](const Matrix& g) {
    Index off = 0;
    for (const Var& p : parts) {
      if (p.requires_grad()) p.tape().accumulate(p, g.middleRows(off, p.rows()));
      off += p.rows();
    }
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error(ErrorCode::ShapeMismatch, "concat_cols: no inputs");
  Index cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != parts[0].rows()) mismatch("concat_cols", parts[0], p);
    cols += p.cols();
  }
  Matrix out(parts[0].rows(), cols);
  Index offset = 0;
  for (const Var& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
  }
  return parts[0].tape().record(std::move(out), parts, [parts](const Matrix& g) {
    Index off = 0;
    for (const Var& p : parts) {
      if (p.requires_grad()) p.tape().accumulate(p, g.middleCols(off, p.cols()));
      off += p.cols();
    }
  });
}

Var transpose(const Var& a) {
  Matrix out = a.value().transpose();
  return a.tape().record(std::move(out), {a},
                         [a](const Matrix& g) { a.tape().accumulate(a, g.transpose()); });
}

Var reshape(const Var& a, Index rows, Index cols) {
  if (rows * cols != a.rows() * a.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "reshape: " + shape(a) + " to " + std::to_string(rows) +
                                              "x" + std::to_string(cols));
  }
  Matrix out = Eigen::Map<const Matrix>(a.value().data(), rows, cols);
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, Eigen::Map<const Matrix>(g.data(), a.rows(), a.cols()));
  });
}

Var gather_rows(const Var& a, std::span<const Index> rows) {
  std::vector<Index> idx(rows.begin(), rows.end());
  Matrix out(static_cast<Index>(idx.size()), a.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= a.rows()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "gather_rows: index " + std::to_string(idx[k]) + " outside " + shape(a));
    }
    out.row(k) = a.value().row(idx[k]);
  }
  return a.tape().record(std::move(out), {a}, [a, idx = std::move(idx)](const Matrix& g) {
    Matrix ga = Matrix::Zero(a.rows(), a.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) ga.row(idx[k]) += g.row(k);
    a.tape().accumulate(a, ga);
  });
}

Var sigmoid(const Var& a) {
  Matrix out = a.value().unaryExpr(&stable_sigmoid);
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    Matrix s = a.value().unaryExpr(&stable_sigmoid);
    a.tape().accumulate(a, g.cwiseProduct(s.cwiseProduct((1.0 - s.array()).matrix())));
  });
}

Var relu(const Var& a) {
  Matrix out = a.value().cwiseMax(0.0);
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, (a.value().array() > 0.0).select(g, 0.0));
  });
}

Var exp(const Var& a) {
  Matrix out = a.value().array().exp();
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, g.cwiseProduct(Matrix(a.value().array().exp())));
  });
}

Var log(const Var& a) {
  Matrix out = a.value().array().log();
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, g.cwiseQuotient(a.value()));
  });
}

Var rsqrt(const Var& a, double eps) {
  Matrix out = (a.value().array() + eps).rsqrt();
  return a.tape().record(std::move(out), {a}, [a, eps](const Matrix& g) {
    Matrix d = -0.5 * (a.value().array() + eps).pow(-1.5);
    a.tape().accumulate(a, g.cwiseProduct(d));
  });
}

Var row_l2_norm(const Var& a) {
  Matrix out = a.value().rowwise().norm();
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    Matrix ga = Matrix::Zero(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      const double n = a.value().row(i).norm();
      if (n > 0) ga.row(i) = (g(i, 0) / n) * a.value().row(i);
    }
    a.tape().accumulate(a, ga);
  });
}

namespace {

Matrix normalized_rows(const Matrix& m, Vector& norms) {
  norms = m.rowwise().norm();
  Matrix out = m;
  for (Index i = 0; i < m.rows(); ++i) {
    if (norms[i] > 0) {
      out.row(i) /= norms[i];
    } else {
      out.row(i).setZero();
    }
  }
  return out;
}

/// Pulls a gradient on unit rows back to the unnormalised rows.
Matrix unnormalize_grad(const Matrix& g_unit, const Matrix& unit, const Vector& norms) {
  Matrix out = Matrix::Zero(unit.rows(), unit.cols());
  for (Index i = 0; i < unit.rows(); ++i) {
    if (norms[i] <= 0) continue;
    const double radial = g_unit.row(i).dot(unit.row(i));
    out.row(i) = (g_unit.row(i) - radial * unit.row(i)) / norms[i];
  }
  return out;
}

}  // namespace

Var cosine_similarity(const Var& a, const Var& b) {
  if (a.cols() != b.cols()) mismatch("cosine_similarity", a, b);
  Vector na, nb;
  Matrix ua = normalized_rows(a.value(), na);
  Matrix ub = normalized_rows(b.value(), nb);
  Matrix out = ua * ub.transpose();
  return a.tape().record(std::move(out), {a, b}, [a, b](const Matrix& g) {
    Vector na, nb;
    Matrix ua = normalized_rows(a.value(), na);
    Matrix ub = normalized_rows(b.value(), nb);
    Tape& t = a.tape();
    if (a.requires_grad()) t.accumulate(a, unnormalize_grad(g * ub, ua, na));
    if (b.requires_grad()) t.accumulate(b, unnormalize_grad(g.transpose() * ua, ub, nb));
  });
}

Var logsumexp(const Var& a) {
  const Matrix& x = a.value();
  Matrix out(x.rows(), 1);
  for (Index i = 0; i < x.rows(); ++i) {
    const double m = x.row(i).maxCoeff();
    out(i, 0) = m + std::log((x.row(i).array() - m).exp().sum());
  }
  Matrix lse = out;
  return a.tape().record(std::move(out), {a}, [a, lse = std::move(lse)](const Matrix& g) {
    Matrix soft = (a.value().colwise() - lse.col(0)).array().exp();
    a.tape().accumulate(a, g.col(0).asDiagonal() * soft);
  });
}

Var reduce_sum(const Var& a) {
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, Matrix::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

Var row_sums(const Var& a) {
  Matrix out = a.value().rowwise().sum();
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, g.col(0).replicate(1, a.cols()));
  });
}

Var column_sums(const Var& a) {
  Matrix out = a.value().colwise().sum();
  return a.tape().record(std::move(out), {a}, [a](const Matrix& g) {
    a.tape().accumulate(a, g.row(0).replicate(a.rows(), 1));
  });
}

}  // namespace hypercondense::ad
