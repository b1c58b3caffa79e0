#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hypercondense {

/// Outcome of one numerical claim check. `worst_margin` is the smallest
/// (bound - observed) over all trials; negative means a violation.
struct CheckResult {
  std::string name;
  long trials = 0;
  long violations = 0;
  double worst_margin = 0.0;
  bool pass = false;
  std::string detail;  // inputs of the first violating (or tightest) trial, for replay
};

/// Truncated diffusion at order 40 versus the eigendecomposition filter on
/// hypergraphs with up to 100 nodes; tolerance 1e-8. Also checks that the
/// Laplacian spectrum lies in [0, 2] up to 1e-9.
CheckResult check_spectral(std::uint64_t seed);

/// Exact Poisson tail versus exp(-t^2 / (2 + t/sqrt(lambda))) for
/// lambda in {0.5, 1, 2, 3, 5, 10}, t in {1, 2, 3, 4}.
CheckResult check_tail();

/// 1 - cos(a, b) = 0.5 |a/|a| - b/|b||^2 on random pairs, to 1e-10.
CheckResult check_mmd_identity(std::uint64_t seed, int trials = 1000);

/// Mean class-level margin >= mean matched similarity - eps / C, with eps the
/// total positive cross similarity, for C in {3, 7}; `trials` draws per C.
CheckResult check_margin(std::uint64_t seed, int trials = 1000);

/// Empirical mis-rank frequency <= mean(e^l - 1) + 3 standard errors, over
/// several score distributions and negative counts, `trials` draws each.
CheckResult check_misranking(std::uint64_t seed, int trials = 100000);

/// Names accepted by run_checks: all, spectral, tail, mmd, margin, misrank.
std::vector<CheckResult> run_checks(const std::string& which, std::uint64_t seed);

nlohmann::json to_json(const CheckResult& r);
std::string format_table(const std::vector<CheckResult>& results);

}  // namespace hypercondense
