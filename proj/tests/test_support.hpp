#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "hypercondense/matrix.hpp"
#include "hypercondense/rng.hpp"

namespace hypercondense::testing {

inline Matrix random_matrix(Index rows, Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

/// Dense incidence (nodes x edges) from member lists.
inline Matrix dense_incidence(Index n, const std::vector<std::vector<Index>>& edges) {
  Matrix h = Matrix::Zero(n, static_cast<Index>(edges.size()));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (Index v : edges[e]) h(v, static_cast<Index>(e)) = 1.0;
  }
  return h;
}

/// Dv^-1/2 H De^-1 H^T Dv^-1/2 written out with dense matrices.
inline Matrix dense_propagation(const Matrix& h) {
  const Vector dv = h.rowwise().sum();
  const Vector de = h.colwise().sum().transpose();
  const Matrix dv_is = dv.array().rsqrt().matrix().asDiagonal();
  const Matrix de_inv = de.array().inverse().matrix().asDiagonal();
  return dv_is * h * de_inv * h.transpose() * dv_is;
}

/// Central differences of a scalar function with respect to every entry of x.
inline Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x, double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  Matrix probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double orig = probe.data()[i];
    probe.data()[i] = orig + h;
    const double up = f(probe);
    probe.data()[i] = orig - h;
    const double down = f(probe);
    probe.data()[i] = orig;
    g.data()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// |a - b| / max(|a|, |b|, floor), maximised over entries.
inline double max_relative_error(const Matrix& a, const Matrix& b, double floor = 1e-3) {
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i], y = b.data()[i];
    worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor}));
  }
  return worst;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("hypercondense_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

}  // namespace hypercondense::testing
