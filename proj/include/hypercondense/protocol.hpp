#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypercondense/config.hpp"
#include "hypercondense/hgnn.hpp"

namespace hypercondense {

struct RunRecord {
  std::string method;
  double ratio = 0.0;
  int set = 0;
  int repeat = 0;
  double test_accuracy = 0.0;
  double val_accuracy = 0.0;
  int best_epoch = 0;
};

struct EvalReport {
  std::vector<RunRecord> runs;  // ordered by (set, repeat)
  double mean = 0.0;
  double stddev = 0.0;          // population (ddof = 0)
  double condense_seconds = 0.0;
  double eval_seconds = 0.0;
};

/// Trains `repeats` fresh HGNNs on every training set and tests each on the
/// original graph. Seeds come from (root, "model", set, repeat). Runs are
/// spread over `jobs` threads; results are reduced in (set, repeat) order so
/// the report does not depend on scheduling.
EvalReport evaluate_sets(const std::vector<TrainingSet>& sets, const EvalTarget& target, const EvalOptions& opt,
                         std::uint64_t root_seed, const std::string& method, double ratio, int repeats, int jobs);

/// Mean and population standard deviation of the test accuracies.
void summarize(EvalReport& report);

}  // namespace hypercondense
