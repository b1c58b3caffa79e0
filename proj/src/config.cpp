#include "hypercondense/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hypercondense/diffusion.hpp"
#include "hypercondense/errors.hpp"

namespace hypercondense {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) config_error(prefix + it.key(), "unknown field");
  }
}

class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& defaulted)
      : obj_(obj), prefix_(std::move(prefix)), defaulted_(defaulted) {}

  void integer(const char* key, int& out, int lo) {
    if (!present(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) config_error(path(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > 1'000'000'000) config_error(path(key), "out of range (min " + std::to_string(lo) + ")");
    out = static_cast<int>(x);
  }

  void real(const char* key, double& out, double lo, double hi, bool open_lo) {
    if (!present(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_number()) config_error(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
      config_error(path(key), "value " + v.dump() + " out of range");
    }
    out = x;
  }

  bool present(const char* key) {
    if (obj_.contains(key) && !obj_.at(key).is_null()) return true;
    defaulted_.push_back(path(key));
    return false;
  }

  std::string path(const char* key) const { return prefix_ + key; }
  const json& at(const char* key) const { return obj_.at(key); }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& defaulted_;
};

const json& section(const json& doc, const char* key, const json& empty) {
  if (!doc.contains(key)) return empty;
  const json& s = doc.at(key);
  if (!s.is_object()) config_error(key, "expected an object");
  return s;
}

}  // namespace

WeightSchedule parse_schedule(const std::string& name) {
  if (name == "cosine") return WeightSchedule::Cosine;
  if (name == "linear") return WeightSchedule::Linear;
  if (name == "step") return WeightSchedule::Step;
  config_error("condense.schedule", "unknown schedule '" + name + "'");
}

std::string to_string(WeightSchedule s) {
  switch (s) {
    case WeightSchedule::Cosine: return "cosine";
    case WeightSchedule::Linear: return "linear";
    case WeightSchedule::Step: return "step";
  }
  return "cosine";
}

int RunConfig::diffusion_order() const { return k_override ? *k_override : truncation_order(lambda); }

double parse_ratio(const std::string& text) {
  std::string s = text;
  double scale = 1.0;
  if (!s.empty() && s.back() == '%') {
    s.pop_back();
    scale = 0.01;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    config_error("ratio", "cannot parse '" + text + "'");
  }
  if (used != s.size()) config_error("ratio", "cannot parse '" + text + "'");
  value *= scale;
  if (!(value > 0.0 && value <= 1.0)) config_error("ratio", "must lie in (0, 1], got '" + text + "'");
  return value;
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) config_error("<root>", "expected an object");
  reject_unknown(doc, "", {"data", "format", "seed", "ratio", "lambda", "k_override", "condense", "eval"});
  RunConfig cfg;
  Reader top(doc, "", cfg.defaulted);

  if (top.present("data")) {
    if (!doc.at("data").is_string()) config_error("data", "expected a string");
    cfg.data = doc.at("data").get<std::string>();
  }
  if (top.present("format")) {
    if (!doc.at("format").is_string()) config_error("format", "expected a string");
    cfg.format = doc.at("format").get<std::string>();
    if (cfg.format != "json" && cfg.format != "text") config_error("format", "expected json or text");
  }
  if (top.present("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      config_error("seed", "expected a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  if (top.present("ratio")) {
    const json& v = doc.at("ratio");
    if (v.is_string()) {
      cfg.ratio = parse_ratio(v.get<std::string>());
    } else if (v.is_number()) {
      cfg.ratio = parse_ratio(v.dump());
    } else {
      config_error("ratio", "expected a number or a percentage string");
    }
  }
  top.real("lambda", cfg.lambda, 0.0, 1e6, true);
  if (top.present("k_override")) {
    int k = 0;
    top.integer("k_override", k, 0);
    cfg.k_override = k;
  }

  const json empty = json::object();
  const json& c = section(doc, "condense", empty);
  reject_unknown(c, "condense.", {"epochs", "samples_per_node", "lr_features", "lr_structure",
                                  "tau_features", "tau_structure", "negatives", "hidden",
                                  "threshold_init", "schedule"});
  Reader cr(c, "condense.", cfg.defaulted);
  CondenseOptions& co = cfg.condense;
  cr.integer("epochs", co.epochs, 1);
  cr.integer("samples_per_node", co.samples_per_node, 1);
  cr.real("lr_features", co.lr_features, 0.0, 10.0, true);
  cr.real("lr_structure", co.lr_structure, 0.0, 10.0, true);
  cr.integer("tau_features", co.tau_features, 0);
  cr.integer("tau_structure", co.tau_structure, 0);
  cr.integer("negatives", co.negatives, 1);
  cr.integer("hidden", co.hidden, 1);
  cr.real("threshold_init", co.threshold_init, -1e3, 1e3, false);
  if (cr.present("schedule")) {
    if (!c.at("schedule").is_string()) config_error("condense.schedule", "expected a string");
    co.schedule = parse_schedule(c.at("schedule").get<std::string>());
  }

  const json& e = section(doc, "eval", empty);
  reject_unknown(e, "eval.", {"hidden", "dropout", "lr", "weight_decay", "max_epochs", "patience",
                              "sets", "repeats"});
  Reader er(e, "eval.", cfg.defaulted);
  EvalOptions& eo = cfg.eval;
  er.integer("hidden", eo.hidden, 1);
  er.real("dropout", eo.dropout, 0.0, 1.0, false);
  er.real("lr", eo.lr, 0.0, 10.0, true);
  er.real("weight_decay", eo.weight_decay, 0.0, 10.0, false);
  er.integer("max_epochs", eo.max_epochs, 1);
  er.integer("patience", eo.patience, 1);
  er.integer("sets", eo.sets, 1);
  er.integer("repeats", eo.repeats, 1);

  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.condense.tau_features + cfg.condense.tau_structure <= 0) {
    config_error("condense.tau_features", "tau_features + tau_structure must be positive");
  }
  if (cfg.eval.dropout >= 1.0) config_error("eval.dropout", "must be below 1");
  if (!(cfg.ratio > 0.0 && cfg.ratio <= 1.0)) config_error("ratio", "must lie in (0, 1]");
  if (!(cfg.lambda > 0.0)) config_error("lambda", "must be positive");
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["data"] = cfg.data.empty() ? json(nullptr) : json(cfg.data);
  j["format"] = cfg.format.empty() ? json(nullptr) : json(cfg.format);
  j["seed"] = cfg.seed;
  j["ratio"] = cfg.ratio;
  j["lambda"] = cfg.lambda;
  j["k_override"] = cfg.k_override ? json(*cfg.k_override) : json(nullptr);
  const CondenseOptions& c = cfg.condense;
  j["condense"] = {{"epochs", c.epochs},
                   {"samples_per_node", c.samples_per_node},
                   {"lr_features", c.lr_features},
                   {"lr_structure", c.lr_structure},
                   {"tau_features", c.tau_features},
                   {"tau_structure", c.tau_structure},
                   {"negatives", c.negatives},
                   {"hidden", c.hidden},
                   {"threshold_init", c.threshold_init},
                   {"schedule", to_string(c.schedule)}};
  const EvalOptions& e = cfg.eval;
  j["eval"] = {{"hidden", e.hidden},         {"dropout", e.dropout},
               {"lr", e.lr},                 {"weight_decay", e.weight_decay},
               {"max_epochs", e.max_epochs}, {"patience", e.patience},
               {"sets", e.sets},             {"repeats", e.repeats}};
  return j;
}

}  // namespace hypercondense
