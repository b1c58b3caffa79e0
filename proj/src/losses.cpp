#include "hypercondense/losses.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "hypercondense/errors.hpp"
#include "hypercondense/ops.hpp"

namespace hypercondense {

using ad::Var;

namespace {

Matrix indicator_transpose(std::span<const int> labels, int num_classes) {
  Matrix y = Matrix::Zero(num_classes, static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) y(labels[i], static_cast<Index>(i)) = 1.0;
  return y;
}

void require_nonzero_rows(const Matrix& m, const char* which) {
  for (Index i = 0; i < m.rows(); ++i) {
    if (m.row(i).squaredNorm() == 0.0) {
      throw Error(ErrorCode::DegeneratePrototype,
                  std::string(which) + " prototype of class " + std::to_string(i) + " has zero norm");
    }
  }
}

}  // namespace

Matrix class_prototypes(const Matrix& features, std::span<const int> labels, int num_classes) {
  Matrix out = Matrix::Zero(num_classes, features.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) out.row(labels[i]) += features.row(static_cast<Index>(i));
  return out;
}

Var class_prototypes(const Var& features, std::span<const int> labels, int num_classes) {
  return ad::matmul(features.tape().constant(indicator_transpose(labels, num_classes)), features);
}

Var coarse_loss(const Var& original, const Var& synthetic) {
  require_nonzero_rows(original.value(), "original");
  require_nonzero_rows(synthetic.value(), "synthetic");
  const Index c = original.rows();
  const Var cos = ad::cosine_similarity(original, synthetic);
  const Var diag = ad::elementwise_mul(cos, original.tape().constant(Matrix::Identity(c, c)));
  // C - tr + (sum - tr)
  return ad::add_scalar(ad::reduce_sum(cos - ad::scalar_mul(diag, 2.0)), static_cast<double>(c));
}

ContrastiveDraw draw_contrastive(const std::vector<std::vector<Index>>& train_by_class,
                                 std::span<const int> synthetic_labels, int num_negatives, Rng& rng) {
  const int num_classes = static_cast<int>(train_by_class.size());
  std::vector<std::vector<Index>> pools(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    for (int o = 0; o < num_classes; ++o) {
      if (o != c) pools[c].insert(pools[c].end(), train_by_class[o].begin(), train_by_class[o].end());
    }
  }
  ContrastiveDraw draw;
  draw.positives.reserve(synthetic_labels.size());
  draw.negatives.reserve(synthetic_labels.size());
  bool warned = false;
  for (int y : synthetic_labels) {
    const auto& same = train_by_class[y];
    draw.positives.push_back(same[rng.uniform_index(same.size())]);
    const auto& pool = pools[y];
    std::vector<Index> neg;
    neg.reserve(num_negatives);
    if (pool.empty()) {
      throw Error(ErrorCode::MissingTrainingClass, "no training nodes outside class " + std::to_string(y));
    }
    if (pool.size() >= static_cast<std::size_t>(num_negatives)) {
      for (std::size_t k : rng.sample_without_replacement(pool.size(), num_negatives)) neg.push_back(pool[k]);
    } else {
      if (!warned) {
        spdlog::warn("negative pool of class {} has {} nodes < {}; sampling with replacement", y,
                     pool.size(), num_negatives);
        warned = true;
      }
      for (int k = 0; k < num_negatives; ++k) neg.push_back(pool[rng.uniform_index(pool.size())]);
    }
    draw.negatives.push_back(std::move(neg));
  }
  return draw;
}

Var fine_loss(const Var& synthetic, const Matrix& original, const ContrastiveDraw& draw) {
  ad::Tape& tape = synthetic.tape();
  const Index n = synthetic.rows();
  if (static_cast<Index>(draw.positives.size()) != n) {
    throw Error(ErrorCode::ShapeMismatch, "contrastive draw does not match synthetic node count");
  }
  auto gathered = [&](auto pick) {
    Matrix m(n, original.cols());
    for (Index i = 0; i < n; ++i) m.row(i) = original.row(pick(i));
    return tape.constant(std::move(m));
  };
  const Var pos = ad::row_sums(ad::elementwise_mul(synthetic, gathered([&](Index i) { return draw.positives[i]; })));
  std::vector<Var> columns{pos};
  const std::size_t k = draw.negatives.empty() ? 0 : draw.negatives[0].size();
  for (std::size_t q = 0; q < k; ++q) {
    columns.push_back(ad::row_sums(
        ad::elementwise_mul(synthetic, gathered([&](Index i) { return draw.negatives[i][q]; }))));
  }
  return ad::reduce_sum(ad::logsumexp(ad::concat_cols(columns)) - pos);
}

Vector contrastive_terms(const Matrix& scores) {
  Vector out(scores.rows());
  for (Index i = 0; i < scores.rows(); ++i) {
    const double m = scores.row(i).maxCoeff();
    out[i] = m + std::log((scores.row(i).array() - m).exp().sum()) - scores(i, 0);
  }
  return out;
}

std::pair<double, double> schedule_weights(int t, int total, WeightSchedule schedule) {
  if (schedule != WeightSchedule::Cosine) {
    throw Error(ErrorCode::ConfigError, "condense.schedule: '" + to_string(schedule) + "' is not implemented");
  }
  const double angle = std::numbers::pi * t / (2.0 * total);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace hypercondense
