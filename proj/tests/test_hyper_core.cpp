#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <set>

#include <Eigen/Eigenvalues>

#include "hypercondense/apportion.hpp"
#include "hypercondense/dataset_io.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/hypergraph.hpp"
#include "hypercondense/propagation.hpp"
#include "hypercondense/splits.hpp"
#include "hypercondense/standin.hpp"
#include "test_support.hpp"

using namespace hypercondense;
using hypercondense::testing::TempDir;

namespace {

Hypergraph three_node() {
  return Hypergraph(Matrix::Identity(3, 3), {{0, 1}, {1, 2}}, {0, 1, 0});
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Hypergraph, ThreeNodeDegrees) {
  const Hypergraph h = three_node();
  EXPECT_EQ(h.num_nodes(), 3);
  EXPECT_EQ(h.num_edges(), 2);
  const DegreePair d = h.degrees();
  EXPECT_EQ(d.node, (Vector(3) << 1, 2, 1).finished());
  EXPECT_EQ(d.edge, (Vector(2) << 2, 2).finished());
}

TEST(Hypergraph, IncidenceViewsAreTransposes) {
  Rng rng(5);
  const Hypergraph h = random_hypergraph(40, 25, 6, 2, 3, rng);
  std::set<std::pair<Index, Index>> by_edge, by_node;
  for (Index e = 0; e < h.num_edges(); ++e) {
    for (Index v : h.edge_members(e)) by_edge.insert({v, e});
  }
  for (Index v = 0; v < h.num_nodes(); ++v) {
    for (Index e : h.node_edges(v)) by_node.insert({v, e});
  }
  EXPECT_EQ(by_edge, by_node);
}

TEST(Hypergraph, IsolatedNodeGetsSelfLoop) {
  const Hypergraph h(Matrix::Zero(4, 1), {{0, 1}, {1, 2}}, {0, 0, 0, 0});
  EXPECT_EQ(h.num_input_edges(), 2);
  EXPECT_EQ(h.num_edges(), 3);
  EXPECT_EQ(h.num_self_loops(), 1);
  EXPECT_TRUE(h.is_self_loop(2));
  ASSERT_EQ(h.edge_members(2).size(), 1u);
  EXPECT_EQ(h.edge_members(2)[0], 3);
  EXPECT_EQ(h.num_input_pins(), 4);
}

TEST(Hypergraph, RejectsInvalidInput) {
  EXPECT_EQ(code_of([] { Hypergraph(Matrix::Zero(2, 1), {{0}, {}}, {0, 0}); }), ErrorCode::EmptyHyperedge);
  EXPECT_EQ(code_of([] { Hypergraph(Matrix::Zero(2, 1), {{0, 5}}, {0, 0}); }), ErrorCode::NodeOutOfRange);
  EXPECT_EQ(code_of([] { Hypergraph(Matrix::Zero(2, 1), {{0}}, {0, 3}, 2); }), ErrorCode::LabelOutOfRange);
  EXPECT_EQ(code_of([] { Hypergraph(Matrix::Zero(3, 1), {{0}}, {0, 0}); }), ErrorCode::InconsistentDimensions);
}

TEST(DatasetIo, JsonEmptyEdgeIsRejected) {
  TempDir dir("io");
  const auto p = dir.path() / "g.json";
  write_file(p, R"({"features": [[1], [2]], "edges": [[0, 1], []], "labels": [0, 0]})");
  EXPECT_EQ(code_of([&] { load_hypergraph(p); }), ErrorCode::EmptyHyperedge);
}

TEST(DatasetIo, ErrorsCarryContext) {
  TempDir dir("io");
  const auto p = dir.path() / "g.json";
  write_file(p, R"({"features": [[1, 2], [3]], "edges": [[0, 1]], "labels": [0, 0]})");
  try {
    load_hypergraph(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentDimensions);
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
  const auto t = dir.path() / "g.txt";
  write_file(t, "hypergraph 2 1 1 2\n0 1.0\n7 2.0\n2 0 1\n");
  try {
    load_hypergraph(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelOutOfRange);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  write_file(t, "hypergraph 2 1 1 2\n0 1.0\n0 abc\n2 0 1\n");
  EXPECT_EQ(code_of([&] { load_hypergraph(t); }), ErrorCode::ParseError);
}

TEST(DatasetIo, JsonAndTextRoundTrip) {
  TempDir dir("io");
  Rng rng(3);
  const Hypergraph h = random_hypergraph(30, 12, 5, 4, 3, rng);
  save_hypergraph(h, dir.path() / "a.json", DatasetFormat::Json);
  save_hypergraph(h, dir.path() / "a.txt", DatasetFormat::Text);
  for (const auto& name : {"a.json", "a.txt"}) {
    const Hypergraph g = load_hypergraph(dir.path() / name);
    EXPECT_EQ(g.features(), h.features()) << name;
    EXPECT_EQ(g.input_edges(), h.input_edges()) << name;
    EXPECT_EQ(g.num_classes(), h.num_classes());
    for (Index v = 0; v < h.num_nodes(); ++v) EXPECT_EQ(g.label(v), h.label(v));
  }
  EXPECT_EQ(file_fingerprint(dir.path() / "a.txt"), file_fingerprint(dir.path() / "a.txt"));
}

TEST(DatasetIo, CoraSizedFileKeepsExactCounts) {
  TempDir dir("io");
  const Hypergraph h = make_standin({});
  save_hypergraph(h, dir.path() / "cora.txt", DatasetFormat::Text);
  const Hypergraph g = load_hypergraph(dir.path() / "cora.txt");
  EXPECT_EQ(g.num_nodes(), 2708);
  EXPECT_EQ(g.num_input_edges(), 1579);
  EXPECT_EQ(g.num_input_pins(), 7494);
  EXPECT_EQ(g.num_classes(), 7);
}

TEST(Apportion, LargestRemainderTieGoesToLowerIndex) {
  // Shares 2.5, 1.5, 1.0: floors (2, 1, 1), the spare seat goes to class 0.
  EXPECT_EQ(apportion(5, {5, 3, 2}, 1), (std::vector<std::int64_t>{3, 1, 1}));
  EXPECT_EQ(apportion(3, {10, 1, 1}, 1), (std::vector<std::int64_t>{1, 1, 1}));
  EXPECT_TRUE(apportion(2, {1, 1, 1}, 1).empty());
  EXPECT_EQ(apportion(4, {1, 1, 1}, 0, {1, 5, 5}), (std::vector<std::int64_t>{1, 2, 1}));
}

TEST(Splits, SizesAndDisjointness) {
  Rng rng(1);
  const Hypergraph h = random_hypergraph(100, 30, 4, 2, 4, rng);
  const Hypergraph s = make_splits(h, {}, 7);
  EXPECT_EQ(s.nodes_with_role(NodeRole::Train).size(), 50u);
  EXPECT_EQ(s.nodes_with_role(NodeRole::Val).size(), 25u);
  EXPECT_EQ(s.nodes_with_role(NodeRole::Test).size(), 25u);
  for (Index v = 0; v < s.num_nodes(); ++v) EXPECT_NE(s.role(v), NodeRole::Unassigned);
}

TEST(Splits, DeterministicPerSeed) {
  Rng rng(2);
  const Hypergraph h = random_hypergraph(60, 20, 4, 2, 3, rng);
  const auto a = make_splits(h, {}, 11);
  const auto b = make_splits(h, {}, 11);
  const auto c = make_splits(h, {}, 12);
  EXPECT_TRUE(std::equal(a.roles().begin(), a.roles().end(), b.roles().begin()));
  EXPECT_FALSE(std::equal(a.roles().begin(), a.roles().end(), c.roles().begin()));
}

TEST(Splits, SmallBalancedClassesAllTrain) {
  // N = 12, C = 4 with 3 nodes each. Train total 6 gives shares 1.5 per class:
  // floors 1, the two spare seats go to classes 0 and 1. Val total 3 gives
  // shares 0.75: floors 0, seats to classes 0, 1, 2.
  std::vector<int> labels;
  for (int c = 0; c < 4; ++c) labels.insert(labels.end(), 3, c);
  const Hypergraph h(Matrix::Zero(12, 1), {{0, 1, 2}}, labels, 4);
  const Hypergraph s = make_splits(h, {}, 3);
  const auto by_class = s.training_nodes_by_class();
  std::vector<std::size_t> counts;
  for (const auto& nodes : by_class) counts.push_back(nodes.size());
  EXPECT_EQ(counts, (std::vector<std::size_t>{2, 2, 1, 1}));
  std::vector<int> val(4, 0);
  for (Index v : s.nodes_with_role(NodeRole::Val)) ++val[labels[v]];
  EXPECT_EQ(val, (std::vector<int>{1, 1, 1, 0}));
}

TEST(Splits, TinyClassCannotStratify) {
  const Hypergraph h(Matrix::Zero(5, 1), {{0, 1}}, {0, 0, 0, 1, 1}, 2);
  EXPECT_EQ(code_of([&] { make_splits(h, {}, 1); }), ErrorCode::CannotStratify);
}

TEST(LabelAudit, CountsOnlyTestReads) {
  Rng rng(4);
  const Hypergraph s = make_splits(random_hypergraph(40, 10, 4, 2, 2, rng), {}, 1);
  s.reset_label_audit();
  s.training_nodes_by_class();
  for (Index v : s.nodes_with_role(NodeRole::Train)) s.label(v);
  EXPECT_EQ(s.test_label_reads(), 0u);
  const auto test = s.nodes_with_role(NodeRole::Test);
  s.label(test.front());
  EXPECT_EQ(s.test_label_reads(), 1u);
  EXPECT_THROW(s.training_labels(test), Error);
}

TEST(Propagation, IdentityIncidenceGivesIdentity) {
  const Hypergraph h(Matrix::Zero(4, 1), {{0}, {1}, {2}, {3}}, {0, 0, 0, 0});
  EXPECT_EQ(Matrix(propagation_matrix(h)), Matrix(Matrix::Identity(4, 4)));
}

TEST(Propagation, ThreeNodeHandComputation) {
  // H = [[1,0],[1,1],[0,1]], Dv = diag(1,2,1), De = diag(2,2):
  // H De^-1 H^T = [[.5,.5,0],[.5,1,.5],[0,.5,.5]], then scale by Dv^-1/2.
  const double r = 0.5 / std::sqrt(2.0);
  Matrix expected(3, 3);
  expected << 0.5, r, 0.0, r, 0.5, r, 0.0, r, 0.5;
  const Matrix p = Matrix(propagation_matrix(three_node()));
  EXPECT_LE((p - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagation, SymmetricAndMatchesDenseFormula) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Hypergraph h = random_hypergraph(20 + 18 * static_cast<Index>(seed), 15, 7, 3, 2, rng);
    const Matrix p = Matrix(propagation_matrix(h));
    EXPECT_EQ((p - p.transpose()).cwiseAbs().maxCoeff(), 0.0);
    std::vector<std::vector<Index>> edges;
    for (Index e = 0; e < h.num_edges(); ++e) edges.emplace_back(h.edge_members(e).begin(), h.edge_members(e).end());
    const Matrix dense = hypercondense::testing::dense_propagation(hypercondense::testing::dense_incidence(h.num_nodes(), edges));
    EXPECT_LE((p - dense).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Propagation, LazyApplyMatchesMaterialized) {
  for (Index n : {10, 57, 200}) {
    Rng rng(static_cast<std::uint64_t>(n));
    const Hypergraph h = random_hypergraph(n, n / 2, 8, 5, 2, rng);
    const PropagationOperator op(h);
    const Matrix x = hypercondense::testing::random_matrix(n, 5, rng);
    const Matrix lazy = op.apply(x);
    const Matrix explicit_product = op.materialize() * x;
    EXPECT_LE((lazy - explicit_product).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Propagation, DegreeEigenvectorAndSpectrum) {
  Rng rng(9);
  const Hypergraph h = random_hypergraph(60, 30, 6, 2, 2, rng);
  const PropagationOperator op(h);
  const Vector sqrt_d = op.inv_sqrt_node_degree().cwiseInverse();
  const Matrix p = Matrix(op.materialize());
  EXPECT_LE((p * sqrt_d - sqrt_d).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(p)};
  EXPECT_GE(es.eigenvalues().minCoeff(), -1.0 - 1e-12);
  EXPECT_LE(es.eigenvalues().maxCoeff(), 1.0 + 1e-12);
}

TEST(Propagation, RowSumsCanExceedOneOnHubs) {
  // A hub in D edges {hub, leaf_k}: its row sums to D * (1/2) / sqrt(D) =
  // sqrt(D)/2 (leaves) + 1/2 (itself). Row sums are therefore not bounded by 1.
  const int d = 9;
  std::vector<std::vector<Index>> edges;
  for (int k = 1; k <= d; ++k) edges.push_back({0, k});
  const Hypergraph h(Matrix::Zero(d + 1, 1), edges, std::vector<int>(d + 1, 0));
  const Matrix p = Matrix(propagation_matrix(h));
  EXPECT_NEAR(p.row(0).sum(), 0.5 + std::sqrt(double(d)) / 2.0, 1e-14);
}
