#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hypercondense {

enum class WeightSchedule { Cosine, Linear, Step };

WeightSchedule parse_schedule(const std::string& name);
std::string to_string(WeightSchedule s);

struct CondenseOptions {
  int epochs = 200;                // T
  int samples_per_node = 10;       // s
  double lr_features = 0.01;       // eta_1
  double lr_structure = 0.001;     // eta_2
  int tau_features = 5;            // tau_1
  int tau_structure = 15;          // tau_2
  int negatives = 10;              // N_neg
  int hidden = 256;
  double threshold_init = 0.5;     // delta_0
  WeightSchedule schedule = WeightSchedule::Cosine;
};

struct EvalOptions {
  int hidden = 64;
  double dropout = 0.5;
  double lr = 0.01;
  double weight_decay = 5e-4;
  int max_epochs = 500;
  int patience = 50;
  int sets = 5;
  int repeats = 5;
};

/// Every knob of a condense/evaluate run. Randomness flows from `seed`
/// through named substreams; see rng.hpp.
struct RunConfig {
  std::string data;                // dataset path, may be set on the command line
  std::string format;              // "json", "text" or empty (by extension)
  std::uint64_t seed = 0;
  double ratio = 0.01;
  double lambda = 2.0;
  std::optional<int> k_override;
  CondenseOptions condense;
  EvalOptions eval;

  /// Names of fields filled from defaults rather than the input document.
  std::vector<std::string> defaulted;

  /// Diffusion order actually used: k_override or the default truncation rule.
  int diffusion_order() const;
};

/// "1%", "0.5%", "0.01" or a JSON number. Must lie in (0, 1].
double parse_ratio(const std::string& text);

/// Parses and validates a config document. Unknown keys and type or range
/// violations throw ConfigError naming the field path (e.g. "condense.epochs").
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Fully resolved document, every default materialised.
nlohmann::json to_json(const RunConfig& cfg);

/// Re-checks ranges after command-line overrides.
void validate(const RunConfig& cfg);

}  // namespace hypercondense
