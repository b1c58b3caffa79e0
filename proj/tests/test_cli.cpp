#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "hypercondense/artifacts.hpp"
#include "hypercondense/config.hpp"
#include "hypercondense/dataset_io.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/pipeline.hpp"
#include "hypercondense/report.hpp"
#include "hypercondense/standin.hpp"
#include "test_support.hpp"

using namespace hypercondense;
using hypercondense::testing::TempDir;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = std::string(HYPERCONDENSE_BIN) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = ::pclose(pipe);
  if (output) *output = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path small_dataset(const fs::path& dir) {
  Rng rng(12);
  const Hypergraph h = random_hypergraph(150, 80, 5, 6, 3, rng);
  const fs::path p = dir / "data.json";
  save_hypergraph(h, p, DatasetFormat::Json);
  return p;
}

EvalReport fake_report(const std::string& method, std::initializer_list<double> accs) {
  EvalReport r;
  int k = 0;
  for (double a : accs) r.runs.push_back({method, 0.01, k / 2, k % 2, a, 0.5, 3}), ++k;
  summarize(r);
  return r;
}

}  // namespace

TEST(Config, DefaultsAreRecorded) {
  const RunConfig cfg = parse_run_config(json::object());
  EXPECT_EQ(cfg.lambda, 2.0);
  EXPECT_EQ(cfg.ratio, 0.01);
  EXPECT_EQ(cfg.diffusion_order(), 7);
  EXPECT_NE(std::find(cfg.defaulted.begin(), cfg.defaulted.end(), "lambda"), cfg.defaulted.end());
  EXPECT_NE(std::find(cfg.defaulted.begin(), cfg.defaulted.end(), "condense.epochs"), cfg.defaulted.end());
  const RunConfig given = parse_run_config(json{{"lambda", 3.0}, {"k_override", 5}});
  EXPECT_EQ(std::find(given.defaulted.begin(), given.defaulted.end(), "lambda"), given.defaulted.end());
  EXPECT_EQ(given.diffusion_order(), 5);
}

TEST(Config, UnknownFieldsNamePath) {
  try {
    parse_run_config(json{{"condense", {{"epoch", 3}}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("condense.epoch"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { parse_run_config(json{{"condense", {{"epochs", -1}}}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { parse_run_config(json{{"lambda", "two"}}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { parse_run_config(json{{"lambda", 0.0}}); }), ErrorCode::ConfigError);
}

TEST(Config, RatioParsing) {
  EXPECT_DOUBLE_EQ(parse_ratio("1%"), 0.01);
  EXPECT_DOUBLE_EQ(parse_ratio("0.5%"), 0.005);
  EXPECT_DOUBLE_EQ(parse_ratio("0.02"), 0.02);
  EXPECT_DOUBLE_EQ(parse_ratio("1"), 1.0);
  EXPECT_THROW(parse_ratio("0"), Error);
  EXPECT_THROW(parse_ratio("150%"), Error);
  EXPECT_THROW(parse_ratio("abc"), Error);
  EXPECT_DOUBLE_EQ(parse_run_config(json{{"ratio", "2%"}}).ratio, 0.02);
}

TEST(Config, JsonRoundTrip) {
  RunConfig cfg = parse_run_config(json{{"seed", 9}, {"ratio", 0.05}, {"condense", {{"epochs", 12}}}});
  const RunConfig back = parse_run_config(to_json(cfg));
  EXPECT_EQ(to_json(back), to_json(cfg));
  EXPECT_EQ(back.condense.epochs, 12);
  EXPECT_EQ(back.seed, 9u);
}

TEST(Report, SummaryRowsAndStableBytes) {
  const std::string a = report_csv(fake_report("random", {0.4, 0.5, 0.45, 0.55}), "fp");
  const std::string b = report_csv(fake_report("ahgcdd", {0.7, 0.8}), "fp");
  auto rows = parse_report_csv(a, "a");
  const auto rows_b = parse_report_csv(b, "b");
  EXPECT_EQ(rows.size(), 4u);
  rows.insert(rows.end(), rows_b.begin(), rows_b.end());
  const Comparison c1 = compare_reports(rows);
  std::reverse(rows.begin(), rows.end());
  const Comparison c2 = compare_reports(rows);
  EXPECT_EQ(c1.table, c2.table);
  EXPECT_EQ(c1.plot_data, c2.plot_data);
  int summaries = 0;
  std::istringstream in(c1.table);
  for (std::string line; std::getline(in, line);) summaries += line.rfind("summary,", 0) == 0;
  EXPECT_EQ(summaries, 2);
  EXPECT_NE(c1.plot_data.find("ahgcdd,0.01,0.750000,0.050000,2"), std::string::npos) << c1.plot_data;
}

TEST(Report, MixedFingerprintsRefused) {
  auto rows = parse_report_csv(report_csv(fake_report("random", {0.4}), "fp1"), "a");
  const auto other = parse_report_csv(report_csv(fake_report("random", {0.6}), "fp2"), "b");
  rows.insert(rows.end(), other.begin(), other.end());
  EXPECT_EQ(code_of([&] { compare_reports(rows); }), ErrorCode::MixedFingerprints);
}

TEST(Artifacts, MatrixAndCondensedRoundTrip) {
  TempDir dir("artifacts");
  Rng rng(1);
  Matrix m = hypercondense::testing::random_matrix(3, 4, rng);
  m(0, 0) = 1.0 / 3.0;
  write_matrix(dir.path(), "m", m);
  EXPECT_EQ(read_matrix(dir.path(), "m"), m);

  Condensation c;
  c.graph.features = m;
  c.graph.incidence = Matrix::Identity(3, 3);
  c.graph.labels = {0, 1, 1};
  c.graph.num_classes = 2;
  c.trajectory.push_back({0, true, 1.0, 0.0, 2.5, 1.5, 2.5});
  write_condensed(dir.path() / "set", c);
  const CondensedHypergraph back = read_condensed(dir.path() / "set");
  EXPECT_EQ(back.features, m);
  EXPECT_EQ(back.incidence, c.graph.incidence);
  EXPECT_EQ(back.labels, c.graph.labels);
  EXPECT_EQ(back.num_classes, 2);
  EXPECT_TRUE(fs::exists(dir.path() / "set" / "loss.csv"));
}

TEST(Pipeline, CondenseEvaluateRoundTrip) {
  TempDir dir("pipeline");
  RunConfig cfg = parse_run_config(json{{"ratio", 0.06}, {"seed", 3}, {"condense", {{"epochs", 4}, {"hidden", 8}}}});
  cfg.data = small_dataset(dir.path()).string();
  const Dataset data = load_dataset(cfg);
  const CondenseRun run = condense_sets(data.graph, cfg, 2);
  write_condense_run(dir.path() / "out", cfg, data, run);
  const json manifest = read_json(dir.path() / "out" / "manifest.json");
  EXPECT_EQ(manifest.at("sets"), 2);
  EXPECT_EQ(manifest.at("dataset").at("fingerprint"), data.fingerprint);
  const auto sets = read_condense_run(dir.path() / "out", 2);
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[1].features, run.sets[1].graph.features);
  cfg.eval.max_epochs = 20;
  const EvalReport r = evaluate_condensed(data.graph, sets, cfg, 2, 1);
  EXPECT_EQ(r.runs.size(), 4u);
  EXPECT_EQ(r.runs[0].method, "ahgcdd");
}

TEST(Cli, ExitCodes) {
  TempDir dir("cli");
  const fs::path data = small_dataset(dir.path());
  std::string out;
  EXPECT_EQ(run_cli("verify --check tail", &out), 0) << out;
  EXPECT_EQ(run_cli("ingest " + data.string(), &out), 0) << out;
  EXPECT_NE(out.find("\"nodes\": 150"), std::string::npos) << out;
  EXPECT_EQ(run_cli("condense --data " + data.string() + " --ratio 0.001 --out " + (dir.path() / "x").string(), &out),
            2)
      << out;
  EXPECT_NE(out.find("TooFewSyntheticNodes"), std::string::npos) << out;
  EXPECT_EQ(run_cli("condense --data " + (dir.path() / "missing.json").string() + " --out " +
                        (dir.path() / "y").string(),
                    &out),
            2)
      << out;
  EXPECT_EQ(run_cli("condense --ratio 1% --out " + (dir.path() / "z").string(), &out), 2) << out;  // no data
  EXPECT_EQ(run_cli("nosuchcommand", &out), 2);
  {
    std::ofstream bad(dir.path() / "bad.json");
    bad << R"({"condense": {"epochz": 3}})";
  }
  EXPECT_EQ(run_cli("condense --config " + (dir.path() / "bad.json").string() + " --data " + data.string() +
                        " --out " + (dir.path() / "w").string(),
                    &out),
            2);
  EXPECT_NE(out.find("condense.epochz"), std::string::npos) << out;
}

TEST(Cli, CondenseEvaluateReport) {
  TempDir dir("cli");
  const fs::path data = small_dataset(dir.path());
  const std::string run = (dir.path() / "run").string();
  const std::string base = (dir.path() / "base").string();
  std::string out;
  ASSERT_EQ(run_cli("condense --data " + data.string() + " --ratio 6% --epochs 4 --sets 2 --seed 1 --out " + run, &out),
            0)
      << out;
  const json manifest = read_json(fs::path(run) / "manifest.json");
  bool lambda_defaulted = false;
  for (const auto& d : manifest.at("defaulted")) lambda_defaulted |= d == "lambda";
  EXPECT_TRUE(lambda_defaulted);
  EXPECT_EQ(manifest.at("config").at("lambda"), 2.0);
  ASSERT_EQ(run_cli("evaluate --condensed " + run + " --repeats 1", &out), 0) << out;
  ASSERT_EQ(run_cli("baseline --method random --data " + data.string() + " --ratio 6% --sets 2 --repeats 1 --out " + base,
                    &out),
            0)
      << out;
  const std::string table = (dir.path() / "cmp.csv").string();
  ASSERT_EQ(run_cli("report " + run + " " + base + " --out " + table, &out), 0) << out;
  const std::string first = read_text(table);
  ASSERT_EQ(run_cli("report " + base + " " + run + " --out " + table, &out), 0) << out;
  EXPECT_EQ(read_text(table), first);

  // Evaluating against a different dataset file is refused.
  Rng rng(99);
  save_hypergraph(random_hypergraph(150, 80, 5, 6, 3, rng), dir.path() / "other.json", DatasetFormat::Json);
  EXPECT_EQ(run_cli("evaluate --condensed " + run + " --data " + (dir.path() / "other.json").string(), &out), 2)
      << out;
}

TEST(Cli, SeedFromEnvironment) {
  TempDir dir("cli");
  const fs::path data = small_dataset(dir.path());
  std::string out;
  const std::string a = (dir.path() / "a").string(), b = (dir.path() / "b").string();
  ASSERT_EQ(run_cli("condense --data " + data.string() + " --ratio 6% --epochs 2 --sets 1 --out " + a, &out), 0);
  ASSERT_EQ(::setenv("HYPERCONDENSE_SEED", "17", 1), 0);
  ASSERT_EQ(run_cli("condense --data " + data.string() + " --ratio 6% --epochs 2 --sets 1 --out " + b, &out), 0);
  ::unsetenv("HYPERCONDENSE_SEED");
  EXPECT_EQ(read_json(fs::path(a) / "config.json").at("seed"), 0);
  EXPECT_EQ(read_json(fs::path(b) / "config.json").at("seed"), 17);
}
