#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypercondense/condenser.hpp"
#include "hypercondense/config.hpp"
#include "hypercondense/hypergraph.hpp"
#include "hypercondense/protocol.hpp"

namespace hypercondense {

inline constexpr const char* kToolVersion = "0.1.0";

/// A loaded, split dataset and its content fingerprint.
struct Dataset {
  Hypergraph graph;
  std::string path;
  std::string fingerprint;
};

/// Loads cfg.data and applies the stratified split seeded from (seed, "split").
Dataset load_dataset(const RunConfig& cfg);

struct CondenseRun {
  std::vector<Condensation> sets;
  double seconds = 0.0;
};

/// Condenses `sets` independent synthetic hypergraphs (set index feeds the
/// init and sampling streams). The original diffusion is computed once.
CondenseRun condense_sets(const Hypergraph& h, const RunConfig& cfg, int sets);

/// Writes set_<k>/ artifacts, config.json (resolved), manifest.json and
/// timing.json. Only manifest.json and timing.json carry run-specific values.
void write_condense_run(const std::filesystem::path& dir, const RunConfig& cfg, const Dataset& data,
                        const CondenseRun& run);

/// Reads set_0 .. set_{n-1} from a condense output directory.
std::vector<CondensedHypergraph> read_condense_run(const std::filesystem::path& dir, int sets);

EvalReport evaluate_condensed(const Hypergraph& h, const std::vector<CondensedHypergraph>& sets,
                              const RunConfig& cfg, int repeats, int jobs);

/// method: random, herding, kcenter, or whole (full training split, one set).
EvalReport run_baseline(const Hypergraph& h, const RunConfig& cfg, const std::string& method, int sets,
                        int repeats, int jobs);

nlohmann::json make_manifest(const std::string& command, const RunConfig& cfg, const Dataset& data,
                             const std::vector<std::string>& outputs);

}  // namespace hypercondense
