#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "hypercondense/condenser.hpp"
#include "hypercondense/coreset.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/hgnn.hpp"
#include "hypercondense/propagation.hpp"
#include "hypercondense/protocol.hpp"
#include "hypercondense/splits.hpp"
#include "hypercondense/standin.hpp"
#include "test_support.hpp"

using namespace hypercondense;
using hypercondense::testing::max_relative_error;
using hypercondense::testing::numeric_gradient;
using hypercondense::testing::random_matrix;

namespace {

Hypergraph split_graph(std::uint64_t seed, Index n = 80, Index d = 5, int classes = 3) {
  Rng rng(seed);
  return make_splits(random_hypergraph(n, n / 2, 5, d, classes, rng), {}, seed);
}

EvalOptions quick_options() {
  EvalOptions opt;
  opt.hidden = 8;
  opt.max_epochs = 60;
  opt.patience = 20;
  return opt;
}

}  // namespace

TEST(Accuracy, Examples) {
  Matrix logits(4, 4);
  logits.setZero();
  logits.col(0).setConstant(1.0);
  const std::vector<Index> nodes{0, 1, 2, 3};
  EXPECT_EQ(accuracy(logits, nodes, {0, 1, 2, 3}), 0.25);
  EXPECT_EQ(accuracy(Matrix(Matrix::Identity(4, 4)), nodes, {0, 1, 2, 3}), 1.0);
  // Ties resolve to the lowest class index.
  EXPECT_EQ(accuracy(Matrix::Zero(2, 3), {0, 1}, {0, 2}), 0.5);
}

TEST(Hgnn, SeparableTrainingSetIsFit) {
  // One training node per class, orthogonal features, singleton hyperedges.
  const int c = 3;
  std::vector<NodeRole> roles(9, NodeRole::Test);
  Matrix x = Matrix::Zero(9, c);
  std::vector<int> y(9);
  std::vector<std::vector<Index>> edges;
  for (Index v = 0; v < 9; ++v) {
    y[v] = static_cast<int>(v % c);
    x(v, y[v]) = 1.0;
    edges.push_back({v});
  }
  roles[0] = roles[1] = roles[2] = NodeRole::Train;
  roles[3] = roles[4] = roles[5] = NodeRole::Val;
  const Hypergraph h = Hypergraph(x, edges, y).with_roles(roles);
  EvalOptions opt = quick_options();
  opt.dropout = 0.0;
  opt.weight_decay = 0.0;
  const TrainingSet data = training_set(h);
  const EvalTarget target(h);
  const HgnnFit fit = train_hgnn(data, target, opt, 1);
  const Matrix logits = hgnn_logits(fit.model, *data.propagation, *data.features);
  EXPECT_EQ(accuracy(logits, data.rows, data.labels), 1.0);
  EXPECT_EQ(evaluate(fit.model, target), 1.0);
}

TEST(Hgnn, DeterministicPerSeed) {
  const Hypergraph h = split_graph(2);
  const TrainingSet data = training_set(h);
  const EvalTarget target(h);
  const HgnnFit a = train_hgnn(data, target, quick_options(), 5);
  const HgnnFit b = train_hgnn(data, target, quick_options(), 5);
  EXPECT_EQ(a.model.w1, b.model.w1);
  EXPECT_EQ(a.model.w2, b.model.w2);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
}

TEST(Hgnn, EarlyStoppingKeepsBestEpoch) {
  const Hypergraph h = split_graph(3);
  EvalOptions opt = quick_options();
  opt.max_epochs = 300;
  opt.patience = 10;
  const HgnnFit fit = train_hgnn(training_set(h), EvalTarget(h), opt, 2);
  EXPECT_LE(fit.epochs_run, fit.best_epoch + 1 + opt.patience);
  const EvalTarget target(h);
  const Matrix logits = hgnn_logits(fit.model, *target.propagation, *target.features);
  EXPECT_EQ(accuracy(logits, target.val_nodes, target.val_labels), fit.best_val_accuracy);
}

TEST(Hgnn, LossGradientMatchesFiniteDifferences) {
  const Hypergraph h = split_graph(4, 30, 4, 2);
  const TrainingSet data = training_set(h);
  Rng rng(1);
  HgnnModel m{random_matrix(4, 5, rng), random_matrix(1, 5, rng), random_matrix(5, 2, rng), random_matrix(1, 2, rng)};
  Matrix mask = Matrix::Ones(30, 5);
  for (Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.uniform01() < 0.3 ? 0.0 : 1.5;
  HgnnModel g;
  hgnn_loss(m, data, mask, &g);
  auto check = [&](Matrix HgnnModel::*field, const Matrix& analytic) {
    const Matrix numeric = numeric_gradient(
        [&](const Matrix& p) {
          HgnnModel probe = m;
          probe.*field = p;
          return hgnn_loss(probe, data, mask, nullptr);
        },
        m.*field);
    EXPECT_LE(max_relative_error(analytic, numeric), 1e-5);
  };
  check(&HgnnModel::w1, g.w1);
  check(&HgnnModel::b1, g.b1);
  check(&HgnnModel::w2, g.w2);
  check(&HgnnModel::b2, g.b2);
}

TEST(Hgnn, FeatureWidthMismatchIsRejected) {
  const Hypergraph h = split_graph(5);
  const TrainingSet data = training_set(Matrix::Identity(2, 2), Matrix::Ones(2, 3), {0, 1}, 3);
  EXPECT_THROW(train_hgnn(data, EvalTarget(h), quick_options(), 0), Error);
}

TEST(Coreset, HerdingAndKCenterOrders) {
  Matrix two(2, 1);
  two << 0.0, 3.0;
  // Mean 1.5 is equidistant; the tie goes to the lower index.
  EXPECT_EQ(herding_order(two, 1), (std::vector<Index>{0}));
  Matrix pts(4, 1);
  pts << 0.0, 1.0, 1.2, 9.0;
  // Mean 2.8: nearest is 1.2 (index 2); herding picks it first.
  EXPECT_EQ(herding_order(pts, 1).front(), 2);
  const auto kc = kcenter_order(pts, 3);
  EXPECT_EQ(kc[0], 2);
  EXPECT_EQ(kc[1], 3);  // farthest from 1.2
  EXPECT_EQ(kc[2], 0);  // farthest from {1.2, 9}
}

TEST(Coreset, HerdingTracksMean) {
  Rng rng(7);
  const Matrix pts = random_matrix(50, 3, rng);
  const auto order = herding_order(pts, 50);
  EXPECT_EQ(std::set<Index>(order.begin(), order.end()).size(), 50u);
  RowVector running = RowVector::Zero(3);
  const RowVector mean = pts.colwise().mean();
  double err10 = 0.0;
  for (int k = 0; k < 10; ++k) running += pts.row(order[k]);
  err10 = (running / 10.0 - mean).norm();
  double random10 = (pts.topRows(10).colwise().mean() - mean).norm();
  EXPECT_LT(err10, random10);
}

TEST(Coreset, QuotasAndClassMembership) {
  const Hypergraph h = split_graph(6, 200);
  const Matrix diffused = h.features();
  for (auto method : {CoresetMethod::Random, CoresetMethod::Herding, CoresetMethod::KCenter}) {
    Rng rng(1);
    const auto nodes = select_coreset(h, diffused, 0.05, method, rng);
    EXPECT_EQ(nodes.size(), 10u) << to_string(method);
    EXPECT_EQ(std::set<Index>(nodes.begin(), nodes.end()).size(), nodes.size());
    for (Index v : nodes) EXPECT_EQ(h.role(v), NodeRole::Train);
    const auto labels = synthesize_labels(h, 0.05);
    std::vector<int> want(3, 0), got(3, 0);
    for (int y : labels) ++want[y];
    for (Index v : nodes) ++got[h.label(v)];
    EXPECT_EQ(got, want);
  }
  EXPECT_EQ(parse_coreset_method("kcenter"), CoresetMethod::KCenter);
  EXPECT_THROW(parse_coreset_method("nope"), Error);
}

TEST(Coreset, FullQuotaSelectsWholeClass) {
  // Two classes with 2 training nodes each; N' = 4 forces every training node.
  std::vector<NodeRole> roles{NodeRole::Train, NodeRole::Train, NodeRole::Train, NodeRole::Train,
                              NodeRole::Val,   NodeRole::Test,  NodeRole::Val,   NodeRole::Test};
  Rng rng(2);
  const Hypergraph h =
      Hypergraph(random_matrix(8, 2, rng), {{0, 1, 2}, {3, 4}, {5, 6, 7}}, {0, 0, 1, 1, 0, 0, 1, 1}).with_roles(roles);
  for (auto method : {CoresetMethod::Random, CoresetMethod::Herding, CoresetMethod::KCenter}) {
    auto nodes = select_coreset(h, h.features(), 0.5, method, rng);
    std::sort(nodes.begin(), nodes.end());
    EXPECT_EQ(nodes, (std::vector<Index>{0, 1, 2, 3}));
  }
}

TEST(Coreset, InducedSubhypergraph) {
  std::vector<NodeRole> roles(6, NodeRole::Train);
  const Hypergraph h = Hypergraph(Matrix::Identity(6, 6), {{0, 1, 2}, {3, 4}, {4, 5}}, {0, 1, 0, 1, 0, 1}).with_roles(roles);
  const std::vector<Index> keep{4, 0, 3};
  const Hypergraph sub = induced_subhypergraph(h, keep);
  EXPECT_EQ(sub.num_nodes(), 3);
  EXPECT_EQ(sub.input_edges(), (std::vector<std::vector<Index>>{{1}, {0, 2}, {0}}));
  EXPECT_EQ(sub.features().row(0), h.features().row(4));
  EXPECT_EQ(sub.label(0), 0);
  EXPECT_EQ(sub.nodes_with_role(NodeRole::Train).size(), 3u);
}

TEST(Coreset, NeverReadsTestLabels) {
  const Hypergraph h = split_graph(8, 200);
  h.reset_label_audit();
  for (auto method : {CoresetMethod::Random, CoresetMethod::Herding, CoresetMethod::KCenter}) {
    Rng rng(1);
    const auto nodes = select_coreset(h, h.features(), 0.05, method, rng);
    induced_subhypergraph(h, nodes);
  }
  EXPECT_EQ(h.test_label_reads(), 0u);
  EvalTarget target(h);
  EXPECT_EQ(h.test_label_reads(), 0u);
  const HgnnFit fit = train_hgnn(training_set(h), target, quick_options(), 0);
  EXPECT_EQ(h.test_label_reads(), 0u);
  evaluate(fit.model, target);
  EXPECT_EQ(h.test_label_reads(), h.nodes_with_role(NodeRole::Test).size());
}

TEST(Protocol, JobsDoNotChangeResults) {
  const Hypergraph h = split_graph(9);
  const EvalTarget target(h);
  const std::vector<TrainingSet> sets{training_set(h), training_set(h)};
  const EvalReport serial = evaluate_sets(sets, target, quick_options(), 3, "x", 0.5, 2, 1);
  const EvalReport parallel = evaluate_sets(sets, target, quick_options(), 3, "x", 0.5, 2, 4);
  ASSERT_EQ(serial.runs.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(serial.runs[k].test_accuracy, parallel.runs[k].test_accuracy);
    EXPECT_EQ(serial.runs[k].set, static_cast<int>(k / 2));
    EXPECT_EQ(serial.runs[k].repeat, static_cast<int>(k % 2));
  }
  EXPECT_EQ(serial.mean, parallel.mean);
}

TEST(Protocol, PopulationStandardDeviation) {
  EvalReport r;
  for (double a : {0.5, 0.7, 0.9}) r.runs.push_back({"m", 0.1, 0, 0, a, 0, 0});
  summarize(r);
  EXPECT_NEAR(r.mean, 0.7, 1e-15);
  EXPECT_NEAR(r.stddev, std::sqrt(0.08 / 3.0), 1e-15);
}
