#include "hypercondense/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hypercondense/rng.hpp"

namespace hypercondense {

void summarize(EvalReport& report) {
  const double n = static_cast<double>(report.runs.size());
  if (report.runs.empty()) return;
  double sum = 0.0;
  for (const RunRecord& r : report.runs) sum += r.test_accuracy;
  report.mean = sum / n;
  double sq = 0.0;
  for (const RunRecord& r : report.runs) sq += (r.test_accuracy - report.mean) * (r.test_accuracy - report.mean);
  report.stddev = std::sqrt(sq / n);
}

EvalReport evaluate_sets(const std::vector<TrainingSet>& sets, const EvalTarget& target, const EvalOptions& opt,
                         std::uint64_t root_seed, const std::string& method, double ratio, int repeats, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t total = sets.size() * static_cast<std::size_t>(repeats);
  std::vector<RunRecord> runs(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const int set = static_cast<int>(k / repeats);
      const int repeat = static_cast<int>(k % repeats);
      try {
        const std::uint64_t seed = derive_seed(root_seed, "model", set, repeat);
        const HgnnFit fit = train_hgnn(sets[set], target, opt, seed);
        runs[k] = {method, ratio, set, repeat, evaluate(fit.model, target), fit.best_val_accuracy, fit.best_epoch};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  EvalReport report;
  report.runs = std::move(runs);
  summarize(report);
  report.eval_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace hypercondense
