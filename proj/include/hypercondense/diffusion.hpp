#pragma once

#include <functional>
#include <vector>

#include "hypercondense/hypergraph.hpp"
#include "hypercondense/matrix.hpp"
#include "hypercondense/propagation.hpp"

namespace hypercondense {

/// Truncated Poisson weights w_k = e^-lambda lambda^k / k!, k = 0..K.
struct PoissonWeights {
  double lambda = 0.0;
  int order = 0;  // K
  std::vector<double> weights;
  /// Probability mass beyond K, summed directly from the pmf (so it stays
  /// accurate far below machine epsilon instead of being 1 - sum).
  double residual_mass = 0.0;
};

/// K = ceil(lambda + t sqrt(lambda)); t = 3 is the default rule.
/// Throws InvalidLambda for lambda <= 0 (or non-finite).
int truncation_order(double lambda, double t = 3.0);

PoissonWeights poisson_weights(double lambda, int order);
/// Weights at the default truncation order.
PoissonWeights poisson_weights(double lambda);

using LinearOperator = std::function<Matrix(const Matrix&)>;

/// sum_k w_k P^k X by repeated application: V_0 = X, V_k = P V_{k-1},
/// accumulated in ascending k. Truncated weights are used as is (no
/// renormalisation). `rows` is the operator dimension, checked against X.
Matrix hkpr_diffuse(const LinearOperator& apply, Index rows, const Matrix& x,
                    const PoissonWeights& w);
Matrix hkpr_diffuse(const PropagationOperator& p, const Matrix& x, const PoissonWeights& w);
Matrix hkpr_diffuse(const Matrix& p, const Matrix& x, const PoissonWeights& w);

/// Largest hypergraph the dense oracle accepts.
inline constexpr Index kOracleMaxNodes = 500;

/// Untruncated heat-kernel filter U diag(exp(-lambda mu)) U^T X with (mu, U)
/// the eigenpairs of the Laplacian I - P. Throws OracleTooLarge above
/// kOracleMaxNodes.
Matrix spectral_oracle(const Hypergraph& h, const Matrix& x, double lambda);
Matrix spectral_oracle(const Matrix& p, const Matrix& x, double lambda);

/// Ascending eigenvalues of I - P for a dense symmetric P.
Vector laplacian_spectrum(const Matrix& p);

/// exp(-t^2 / (2 + t / sqrt(lambda))).
double tail_bound(double lambda, double t);

/// Exact Pr[N >= x] for N ~ Poisson(lambda), summed from the pmf.
double poisson_upper_tail(double lambda, double x);

struct TailCheck {
  double lambda = 0.0;
  double t = 0.0;
  double exact = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Compares Pr[N >= lambda + t sqrt(lambda)] against tail_bound(lambda, t).
TailCheck verify_tail_bound(double lambda, double t);

}  // namespace hypercondense
