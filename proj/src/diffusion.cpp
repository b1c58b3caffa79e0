#include "hypercondense/diffusion.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "hypercondense/errors.hpp"

namespace hypercondense {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidLambda, "lambda must be positive, got " + std::to_string(lambda));
  }
}

double log_pmf(double lambda, long k) {
  return -lambda + static_cast<double>(k) * std::log(lambda) - std::lgamma(static_cast<double>(k) + 1.0);
}

/// Sum of pmf(k) for k >= first. Terms beyond the mode shrink geometrically,
/// so the loop stops once they no longer change the sum.
double tail_from(double lambda, long first) {
  if (first <= 0) return 1.0;
  double sum = 0.0;
  for (long k = first;; ++k) {
    const double term = std::exp(log_pmf(lambda, k));
    sum += term;
    if (static_cast<double>(k) > lambda && (term <= sum * 1e-18 || term == 0.0)) break;
  }
  return sum;
}

}  // namespace

int truncation_order(double lambda, double t) {
  check_lambda(lambda);
  return static_cast<int>(std::ceil(lambda + t * std::sqrt(lambda)));
}

PoissonWeights poisson_weights(double lambda, int order) {
  check_lambda(lambda);
  if (order < 0) throw Error(ErrorCode::ConfigError, "truncation order must be >= 0");
  PoissonWeights w;
  w.lambda = lambda;
  w.order = order;
  w.weights.resize(order + 1);
  for (int k = 0; k <= order; ++k) w.weights[k] = std::exp(log_pmf(lambda, k));
  w.residual_mass = tail_from(lambda, order + 1);
  return w;
}

PoissonWeights poisson_weights(double lambda) { return poisson_weights(lambda, truncation_order(lambda)); }

Matrix hkpr_diffuse(const LinearOperator& apply, Index rows, const Matrix& x, const PoissonWeights& w) {
  if (x.rows() != rows) {
    throw Error(ErrorCode::ShapeMismatch, "diffusion operator is " + std::to_string(rows) + "x" +
                                              std::to_string(rows) + ", features have " +
                                              std::to_string(x.rows()) + " rows");
  }
  Matrix acc = w.weights[0] * x;
  Matrix v = x;
  for (int k = 1; k <= w.order; ++k) {
    v = apply(v);
    acc += w.weights[k] * v;
  }
  return acc;
}

Matrix hkpr_diffuse(const PropagationOperator& p, const Matrix& x, const PoissonWeights& w) {
  return hkpr_diffuse([&p](const Matrix& m) { return p.apply(m); }, p.size(), x, w);
}

Matrix hkpr_diffuse(const Matrix& p, const Matrix& x, const PoissonWeights& w) {
  if (p.rows() != p.cols()) throw Error(ErrorCode::ShapeMismatch, "propagation matrix is not square");
  return hkpr_diffuse([&p](const Matrix& m) { return Matrix(p * m); }, p.rows(), x, w);
}

Matrix spectral_oracle(const Matrix& p, const Matrix& x, double lambda) {
  check_lambda(lambda);
  if (p.rows() > kOracleMaxNodes) {
    throw Error(ErrorCode::OracleTooLarge, "spectral oracle is capped at " +
                                               std::to_string(kOracleMaxNodes) + " nodes, got " +
                                               std::to_string(p.rows()));
  }
  if (p.rows() != p.cols() || x.rows() != p.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "spectral oracle: operator and features disagree");
  }
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd::Identity(p.rows(), p.cols()) - Eigen::MatrixXd(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  const Eigen::MatrixXd& u = solver.eigenvectors();
  const Eigen::VectorXd filter = (-lambda * solver.eigenvalues().array()).exp();
  return u * filter.asDiagonal() * (u.transpose() * Eigen::MatrixXd(x));
}

Matrix spectral_oracle(const Hypergraph& h, const Matrix& x, double lambda) {
  if (h.num_nodes() > kOracleMaxNodes) {
    throw Error(ErrorCode::OracleTooLarge, "spectral oracle is capped at " +
                                               std::to_string(kOracleMaxNodes) + " nodes, got " +
                                               std::to_string(h.num_nodes()));
  }
  return spectral_oracle(Matrix(propagation_matrix(h)), x, lambda);
}

Vector laplacian_spectrum(const Matrix& p) {
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd::Identity(p.rows(), p.cols()) - Eigen::MatrixXd(p);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(laplacian, Eigen::EigenvaluesOnly).eigenvalues();
}

double tail_bound(double lambda, double t) {
  check_lambda(lambda);
  if (!(t > 0.0)) throw Error(ErrorCode::ConfigError, "tail bound needs t > 0");
  return std::exp(-t * t / (2.0 + t / std::sqrt(lambda)));
}

double poisson_upper_tail(double lambda, double x) {
  check_lambda(lambda);
  // Tiny downward slack keeps an integer threshold from rounding up past itself.
  return tail_from(lambda, static_cast<long>(std::ceil(x - 1e-9)));
}

TailCheck verify_tail_bound(double lambda, double t) {
  TailCheck c;
  c.lambda = lambda;
  c.t = t;
  c.bound = tail_bound(lambda, t);
  c.exact = poisson_upper_tail(lambda, lambda + t * std::sqrt(lambda));
  c.holds = c.exact <= c.bound;
  return c;
}

}  // namespace hypercondense
