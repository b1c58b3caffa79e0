#include "hypercondense/pipeline.hpp"

#include <chrono>
#include <ctime>

#include "hypercondense/artifacts.hpp"
#include "hypercondense/coreset.hpp"
#include "hypercondense/dataset_io.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/hgnn.hpp"
#include "hypercondense/rng.hpp"
#include "hypercondense/splits.hpp"
#include "hypercondense/structure_generator.hpp"

namespace hypercondense {

namespace fs = std::filesystem;
using nlohmann::json;

Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.data.empty()) throw Error(ErrorCode::ConfigError, "data: no dataset path given");
  const Hypergraph raw = cfg.format.empty() ? load_hypergraph(cfg.data)
                                            : load_hypergraph(cfg.data, parse_dataset_format(cfg.format));
  return {make_splits(raw, {}, derive_seed(cfg.seed, "split")), cfg.data, file_fingerprint(cfg.data)};
}

CondenseRun condense_sets(const Hypergraph& h, const RunConfig& cfg, int sets) {
  const auto start = std::chrono::steady_clock::now();
  CondenseRun run;
  const Matrix diffused = diffuse_original(h, cfg);
  for (int s = 0; s < sets; ++s) run.sets.push_back(condense(h, diffused, cfg, s));
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

json make_manifest(const std::string& command, const RunConfig& cfg, const Dataset& data,
                   const std::vector<std::string>& outputs) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"tool", "hypercondense"},
          {"version", kToolVersion},
          {"command", command},
          {"dataset", {{"path", data.path}, {"fingerprint", data.fingerprint}}},
          {"seeds", {{"root", cfg.seed}, {"streams", {"split", "init", "sampling", "model"}}}},
          {"config", to_json(cfg)},
          {"defaulted", cfg.defaulted},
          {"created_at", stamp},
          {"outputs", outputs}};
}

void write_condense_run(const fs::path& dir, const RunConfig& cfg, const Dataset& data, const CondenseRun& run) {
  fs::create_directories(dir);
  std::vector<std::string> outputs{"config.json", "timing.json"};
  for (std::size_t s = 0; s < run.sets.size(); ++s) {
    const std::string name = "set_" + std::to_string(s);
    write_condensed(dir / name, run.sets[s]);
    outputs.push_back(name);
  }
  json resolved = to_json(cfg);
  resolved["sets"] = run.sets.size();
  resolved["dataset_fingerprint"] = data.fingerprint;
  write_json(dir / "config.json", resolved);
  write_json(dir / "timing.json", {{"condense_seconds", run.seconds}});
  json manifest = make_manifest("condense", cfg, data, outputs);
  manifest["sets"] = run.sets.size();
  write_json(dir / "manifest.json", manifest);
}

std::vector<CondensedHypergraph> read_condense_run(const fs::path& dir, int sets) {
  std::vector<CondensedHypergraph> out;
  for (int s = 0; s < sets; ++s) out.push_back(read_condensed(dir / ("set_" + std::to_string(s))));
  return out;
}

EvalReport evaluate_condensed(const Hypergraph& h, const std::vector<CondensedHypergraph>& sets,
                              const RunConfig& cfg, int repeats, int jobs) {
  std::vector<TrainingSet> data;
  for (const CondensedHypergraph& g : sets) {
    data.push_back(training_set(condensed_propagation_values(g.incidence), g.features, g.labels, g.num_classes));
  }
  const EvalTarget target(h);
  return evaluate_sets(data, target, cfg.eval, cfg.seed, "ahgcdd", cfg.ratio, repeats, jobs);
}

EvalReport run_baseline(const Hypergraph& h, const RunConfig& cfg, const std::string& method, int sets,
                        int repeats, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrainingSet> data;
  double ratio = cfg.ratio;
  if (method == "whole") {
    data.push_back(training_set(h));
    ratio = 1.0;
  } else {
    const CoresetMethod m = parse_coreset_method(method);
    const Matrix diffused = diffuse_original(h, cfg);
    for (int s = 0; s < sets; ++s) {
      Rng rng(cfg.seed, "coreset", static_cast<std::uint64_t>(s));
      const auto nodes = select_coreset(h, diffused, cfg.ratio, m, rng);
      data.push_back(training_set(induced_subhypergraph(h, nodes)));
    }
  }
  const double select_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const EvalTarget target(h);
  EvalReport report = evaluate_sets(data, target, cfg.eval, cfg.seed, method, ratio, repeats, jobs);
  report.condense_seconds = select_seconds;
  return report;
}

}  // namespace hypercondense
