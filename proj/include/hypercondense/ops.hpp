#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hypercondense/tape.hpp"

namespace hypercondense::ad {

// Shapes are (rows, cols). "Row broadcast" means the right operand may be a
// 1 x cols row vector applied to every row; no other broadcasting exists.
// Every op throws ShapeMismatch (naming both shapes) on incompatible inputs.

Var matmul(const Var& a, const Var& b);
/// Constant sparse left operand: S * x.
Var spmm(std::shared_ptr<const SparseMatrix> s, const Var& x);

Var add(const Var& a, const Var& b);  // row broadcast on b
Var sub(const Var& a, const Var& b);  // row broadcast on b
Var scalar_mul(const Var& a, double s);
Var add_scalar(const Var& a, double s);
Var elementwise_mul(const Var& a, const Var& b);  // row broadcast on b
/// diag(v) * a for a column vector v (rows x 1).
Var scale_rows(const Var& a, const Var& v);

Var concat_rows(const std::vector<Var>& parts);
Var concat_cols(const std::vector<Var>& parts);
Var transpose(const Var& a);
/// Row-major reinterpretation; rows * cols must be preserved.
Var reshape(const Var& a, Index rows, Index cols);
Var gather_rows(const Var& a, std::span<const Index> rows);

Var sigmoid(const Var& a);
/// Subgradient 0 at 0.
Var relu(const Var& a);
Var exp(const Var& a);
Var log(const Var& a);
/// (x + eps)^(-1/2).
Var rsqrt(const Var& a, double eps = 1e-12);

/// rows x 1 Euclidean norms; zero rows get a zero subgradient.
Var row_l2_norm(const Var& a);
/// (m x d, n x d) -> m x n matrix of row cosines. A zero row yields 0.
Var cosine_similarity(const Var& a, const Var& b);
/// rows x 1, max-shifted.
Var logsumexp(const Var& a);

Var reduce_sum(const Var& a);  // 1 x 1
Var row_sums(const Var& a);     // rows x 1
Var column_sums(const Var& a);  // 1 x cols

inline Var operator+(const Var& a, const Var& b) { return add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return sub(a, b); }
inline Var operator*(double s, const Var& a) { return scalar_mul(a, s); }

}  // namespace hypercondense::ad
