// hypercondense: condense attributed hypergraphs and evaluate the result.
//
// Exit codes: 0 success, 1 internal error, 2 user or config error,
// 3 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercondense/artifacts.hpp"
#include "hypercondense/config.hpp"
#include "hypercondense/dataset_io.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/pipeline.hpp"
#include "hypercondense/report.hpp"
#include "hypercondense/standin.hpp"
#include "hypercondense/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hypercondense;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUser = 2;
constexpr int kExitVerify = 3;

/// Options shared by condense and baseline.
struct RunFlags {
  std::string config;
  std::string data;
  std::string format;
  std::string ratio;
  std::optional<double> lambda;
  std::optional<int> k_override;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<int> sets;
  std::optional<int> repeats;
  int jobs = 1;
  std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "Run config JSON");
  cmd->add_option("--data", f.data, "Dataset path (overrides the config)");
  cmd->add_option("--format", f.format, "Dataset format: json or text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--ratio", f.ratio, "Condensation ratio, e.g. 1% or 0.01");
  cmd->add_option("--lambda", f.lambda, "Heat kernel parameter");
  cmd->add_option("--k-override", f.k_override, "Diffusion order instead of ceil(lambda + 3 sqrt(lambda))");
  cmd->add_option("--seed", f.seed, "Root seed (falls back to HYPERCONDENSE_SEED)");
  cmd->add_option("--epochs", f.epochs, "Condensation epochs");
  cmd->add_option("--sets", f.sets, "Number of synthetic sets");
  cmd->add_option("--repeats", f.repeats, "Evaluation repeats per set");
  cmd->add_option("--jobs", f.jobs, "Worker threads for evaluation")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output directory")->required();
}

/// Precedence: command line, then config file, then HYPERCONDENSE_SEED, then 0.
std::uint64_t env_seed() {
  const char* env = std::getenv("HYPERCONDENSE_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ConfigError, "HYPERCONDENSE_SEED: not a non-negative integer");
}

void erase_default(RunConfig& cfg, const std::string& key) { std::erase(cfg.defaulted, key); }

RunConfig resolve_config(const RunFlags& f) {
  RunConfig cfg = f.config.empty() ? parse_run_config(json::object()) : load_run_config(f.config);
  if (!f.data.empty()) {
    cfg.data = f.data;
    erase_default(cfg, "data");
  }
  if (!f.format.empty()) {
    cfg.format = f.format;
    erase_default(cfg, "format");
  }
  if (!f.ratio.empty()) {
    cfg.ratio = parse_ratio(f.ratio);
    erase_default(cfg, "ratio");
  }
  if (f.lambda) {
    cfg.lambda = *f.lambda;
    erase_default(cfg, "lambda");
  }
  if (f.k_override) {
    cfg.k_override = *f.k_override;
    erase_default(cfg, "k_override");
  }
  if (f.epochs) {
    cfg.condense.epochs = *f.epochs;
    erase_default(cfg, "condense.epochs");
  }
  if (f.sets) {
    cfg.eval.sets = *f.sets;
    erase_default(cfg, "eval.sets");
  }
  if (f.repeats) {
    cfg.eval.repeats = *f.repeats;
    erase_default(cfg, "eval.repeats");
  }
  if (f.seed) {
    cfg.seed = *f.seed;
    erase_default(cfg, "seed");
  } else if (std::find(cfg.defaulted.begin(), cfg.defaulted.end(), "seed") != cfg.defaulted.end()) {
    const char* env = std::getenv("HYPERCONDENSE_SEED");
    if (env && *env) {
      cfg.seed = env_seed();
      erase_default(cfg, "seed");
    }
  }
  validate(cfg);
  if (cfg.eval.sets < 1 || cfg.eval.repeats < 1) throw Error(ErrorCode::ConfigError, "sets and repeats must be >= 1");
  return cfg;
}

void print_summary(const EvalReport& r, const std::string& method) {
  std::printf("%s: %zu runs, test accuracy %.2f +- %.2f %%\n", method.c_str(), r.runs.size(), 100.0 * r.mean,
              100.0 * r.stddev);
}

int cmd_ingest(const std::string& path, const std::string& format, const std::string& out,
               const std::string& out_format) {
  const Hypergraph h = format.empty() ? load_hypergraph(path) : load_hypergraph(path, parse_dataset_format(format));
  json summary = {{"path", path},
                  {"fingerprint", file_fingerprint(path)},
                  {"nodes", h.num_nodes()},
                  {"hyperedges", h.num_input_edges()},
                  {"pins", h.num_input_pins()},
                  {"self_loops_added", h.num_self_loops()},
                  {"features", h.num_features()},
                  {"classes", h.num_classes()}};
  if (!out.empty()) {
    const DatasetFormat f = out_format.empty() ? (fs::path(out).extension() == ".json" ? DatasetFormat::Json
                                                                                      : DatasetFormat::Text)
                                               : parse_dataset_format(out_format);
    save_hypergraph(h.without_roles(), out, f);
    summary["written"] = out;
  }
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_condense(const RunFlags& f) {
  const RunConfig cfg = resolve_config(f);
  const Dataset data = load_dataset(cfg);
  const CondenseRun run = condense_sets(data.graph, cfg, cfg.eval.sets);
  write_condense_run(f.out, cfg, data, run);
  std::printf("condensed %d set(s) of %ld nodes in %.2f s -> %s\n", cfg.eval.sets,
              static_cast<long>(run.sets.front().graph.num_nodes()), run.seconds, f.out.c_str());
  return kExitOk;
}

int cmd_evaluate(const std::string& dir, const std::string& data_override, std::optional<int> repeats,
                 std::optional<int> sets, int jobs, const std::string& out) {
  const json manifest = read_json(fs::path(dir) / "manifest.json");
  RunConfig cfg = parse_run_config(manifest.at("config"));
  if (!data_override.empty()) cfg.data = data_override;
  const int available = manifest.at("sets").get<int>();
  const int use_sets = sets.value_or(available);
  if (use_sets > available) {
    throw Error(ErrorCode::ConfigError, "sets: requested " + std::to_string(use_sets) + " but only " +
                                            std::to_string(available) + " were condensed");
  }
  const Dataset data = load_dataset(cfg);
  const std::string expected = manifest.at("dataset").at("fingerprint").get<std::string>();
  if (data.fingerprint != expected) {
    throw Error(ErrorCode::MixedFingerprints, "dataset fingerprint " + data.fingerprint +
                                                  " does not match the condensed run (" + expected + ")");
  }
  const auto condensed = read_condense_run(dir, use_sets);
  EvalReport report = evaluate_condensed(data.graph, condensed, cfg, repeats.value_or(cfg.eval.repeats), jobs);
  const fs::path target = out.empty() ? fs::path(dir) / "report.csv" : fs::path(out);
  write_text(target, report_csv(report, data.fingerprint));
  write_json(target.parent_path() / (target.stem().string() + "_timing.json"),
             {{"eval_seconds", report.eval_seconds}});
  print_summary(report, "ahgcdd");
  return kExitOk;
}

int cmd_baseline(const RunFlags& f, const std::string& method) {
  const RunConfig cfg = resolve_config(f);
  const Dataset data = load_dataset(cfg);
  const int sets = method == "whole" ? 1 : cfg.eval.sets;
  EvalReport report = run_baseline(data.graph, cfg, method, sets, cfg.eval.repeats, f.jobs);
  fs::create_directories(f.out);
  write_text(fs::path(f.out) / "report.csv", report_csv(report, data.fingerprint));
  json resolved = to_json(cfg);
  resolved["method"] = method;
  write_json(fs::path(f.out) / "config.json", resolved);
  json manifest = make_manifest("baseline", cfg, data, {"report.csv", "config.json", "timing.json"});
  manifest["method"] = method;
  write_json(fs::path(f.out) / "manifest.json", manifest);
  write_json(fs::path(f.out) / "timing.json",
             {{"selection_seconds", report.condense_seconds}, {"eval_seconds", report.eval_seconds}});
  print_summary(report, method);
  return kExitOk;
}

int cmd_verify(const std::string& check, std::optional<std::uint64_t> seed, const std::string& json_out) {
  const std::uint64_t root = seed ? *seed : env_seed();
  const auto results = run_checks(check, root);
  std::cout << format_table(results);
  json doc = {{"seed", root}, {"checks", json::array()}};
  bool ok = true;
  for (const CheckResult& r : results) {
    doc["checks"].push_back(to_json(r));
    ok = ok && r.pass;
  }
  doc["pass"] = ok;
  if (json_out.empty()) {
    std::cout << doc.dump() << "\n";
  } else {
    write_json(json_out, doc);
  }
  return ok ? kExitOk : kExitVerify;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out, const std::string& plot) {
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  const Comparison cmp = compare_reports(load_report_rows(paths));
  write_text(out, cmp.table);
  if (!plot.empty()) write_text(plot, cmp.plot_data);
  std::cout << cmp.plot_data;
  return kExitOk;
}

int cmd_standin(const std::string& out, const std::string& format, std::uint64_t seed, const StandinOptions& base) {
  StandinOptions o = base;
  o.seed = seed;
  const Hypergraph h = make_standin(o);
  const DatasetFormat f = format.empty() ? (fs::path(out).extension() == ".json" ? DatasetFormat::Json
                                                                                : DatasetFormat::Text)
                                         : parse_dataset_format(format);
  save_hypergraph(h, out, f);
  std::printf("wrote %s: %ld nodes, %ld hyperedges, %ld pins, %ld features, %d classes\n", out.c_str(),
              static_cast<long>(h.num_nodes()), static_cast<long>(h.num_input_edges()),
              static_cast<long>(h.num_input_pins()), static_cast<long>(h.num_features()), h.num_classes());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph condensation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string ingest_path, ingest_format, ingest_out, ingest_out_format;
  auto* ingest = app.add_subcommand("ingest", "Load and validate a dataset, print its statistics");
  ingest->add_option("path", ingest_path, "Dataset file")->required();
  ingest->add_option("--format", ingest_format, "json or text (default: by extension)")
      ->check(CLI::IsMember({"json", "text"}));
  ingest->add_option("--out", ingest_out, "Re-serialise to this path");
  ingest->add_option("--out-format", ingest_out_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  RunFlags condense_flags;
  auto* condense_cmd = app.add_subcommand("condense", "Condense a dataset into synthetic hypergraphs");
  add_run_flags(condense_cmd, condense_flags);

  RunFlags baseline_flags;
  std::string method;
  auto* baseline = app.add_subcommand("baseline", "Evaluate a coreset or full-data baseline");
  add_run_flags(baseline, baseline_flags);
  baseline->add_option("--method", method, "random, herding, kcenter or whole")
      ->required()
      ->check(CLI::IsMember({"random", "herding", "kcenter", "whole"}));

  std::string eval_dir, eval_data, eval_out;
  std::optional<int> eval_repeats, eval_sets;
  int eval_jobs = 1;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Train HGNNs on condensed sets, test on the original graph");
  evaluate_cmd->add_option("--condensed", eval_dir, "Output directory of condense")->required();
  evaluate_cmd->add_option("--data", eval_data, "Dataset path (default: the one recorded in the manifest)");
  evaluate_cmd->add_option("--repeats", eval_repeats, "Repeats per set");
  evaluate_cmd->add_option("--sets", eval_sets, "Number of sets to evaluate");
  evaluate_cmd->add_option("--jobs", eval_jobs, "Worker threads")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--out", eval_out, "Report CSV path (default: <condensed>/report.csv)");

  std::string check = "all", verify_json;
  std::optional<std::uint64_t> verify_seed;
  auto* verify = app.add_subcommand("verify", "Numerically check the theoretical claims");
  verify->add_option("--check", check, "all, spectral, tail, mmd, margin or misrank")
      ->check(CLI::IsMember({"all", "spectral", "tail", "tail-bound", "mmd", "margin", "misrank"}));
  verify->add_option("--seed", verify_seed, "Root seed");
  verify->add_option("--json", verify_json, "Write the machine-readable result here instead of stdout");

  std::vector<std::string> report_inputs;
  std::string report_out, report_plot;
  auto* report = app.add_subcommand("report", "Aggregate report CSVs into a comparison table");
  report->add_option("inputs", report_inputs, "Run directories or report CSVs")->required();
  report->add_option("--out", report_out, "Comparison CSV")->required();
  report->add_option("--plot-data", report_plot, "Plot-data CSV (method, ratio, mean, std)");

  std::string standin_out, standin_format;
  std::uint64_t standin_seed = 0;
  StandinOptions standin_opts;
  auto* standin = app.add_subcommand("standin", "Write the synthetic Cora-sized stand-in dataset");
  standin->add_option("--out", standin_out, "Output path")->required();
  standin->add_option("--format", standin_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  standin->add_option("--seed", standin_seed, "Generator seed");
  standin->add_option("--features", standin_opts.num_features, "Vocabulary size");
  standin->add_option("--purity", standin_opts.topic_purity, "Share of class-topic words");
  standin->add_option("--topic-words", standin_opts.topic_words, "Words per class vocabulary");
  standin->add_option("--homophily", standin_opts.edge_homophily, "Share of same-class hyperedge members");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_path, ingest_format, ingest_out, ingest_out_format);
    if (*condense_cmd) return cmd_condense(condense_flags);
    if (*baseline) return cmd_baseline(baseline_flags, method);
    if (*evaluate_cmd) return cmd_evaluate(eval_dir, eval_data, eval_repeats, eval_sets, eval_jobs, eval_out);
    if (*verify) return cmd_verify(check, verify_seed, verify_json);
    if (*report) return cmd_report(report_inputs, report_out, report_plot);
    if (*standin) return cmd_standin(standin_out, standin_format, standin_seed, standin_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_user_error() ? kExitUser : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
