#include "hypercondense/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "hypercondense/diffusion.hpp"
#include "hypercondense/errors.hpp"
#include "hypercondense/losses.hpp"
#include "hypercondense/propagation.hpp"
#include "hypercondense/rng.hpp"
#include "hypercondense/standin.hpp"

namespace hypercondense {

namespace {

class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); result_.worst_margin = std::numeric_limits<double>::infinity(); }

  /// Records one trial with slack = bound - observed.
  void add(double slack, const std::string& inputs) {
    ++result_.trials;
    if (!(slack >= 0.0)) {
      if (result_.violations == 0) result_.detail = "violation: " + inputs;
      ++result_.violations;
    }
    if (slack < result_.worst_margin || std::isnan(slack)) {
      result_.worst_margin = slack;
      if (result_.violations == 0) tightest_ = inputs;
    }
  }

  CheckResult finish() {
    result_.pass = result_.violations == 0 && result_.trials > 0;
    if (result_.violations == 0) result_.detail = "tightest: " + tightest_;
    return result_;
  }

 private:
  CheckResult result_;
  std::string tightest_;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vector random_unit(Index dim, Rng& rng) {
  Vector v(dim);
  do {
    for (Index i = 0; i < dim; ++i) v[i] = rng.normal();
  } while (v.norm() == 0.0);
  return v / v.norm();
}

void spectral_instance(Tally& tally, const Hypergraph& h, const Matrix& x, double lambda, const std::string& tag) {
  const Matrix p = Matrix(propagation_matrix(h));
  const Matrix truncated = hkpr_diffuse(PropagationOperator(h), x, poisson_weights(lambda, 40));
  const Matrix exact = spectral_oracle(p, x, lambda);
  const double err = (truncated - exact).cwiseAbs().maxCoeff();
  tally.add(1e-8 - err, fmt("%s lambda=%g N=%ld max_err=%.3e", tag.c_str(), lambda, static_cast<long>(h.num_nodes()), err));
  const Vector mu = laplacian_spectrum(p);
  const double spill = std::max(-1e-9 - mu.minCoeff(), mu.maxCoeff() - 2.0 - 1e-9);
  tally.add(-spill, fmt("%s spectrum [%.3e, %.6f]", tag.c_str(), mu.minCoeff(), mu.maxCoeff()));
}

}  // namespace

CheckResult check_spectral(std::uint64_t seed) {
  Tally tally("spectral");
  const std::vector<double> lambdas{0.5, 1.0, 2.0, 3.0, 5.0};
  {
    std::vector<std::vector<Index>> singletons;
    for (Index v = 0; v < 6; ++v) singletons.push_back({v});
    Rng rng(seed, "theory-spectral", 0);
    Matrix x(6, 3);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    const Hypergraph identity(x, singletons, std::vector<int>(6, 0), 1);
    for (double l : lambdas) spectral_instance(tally, identity, x, l, "identity");
    const Hypergraph path(Matrix::Identity(3, 3), {{0, 1}, {1, 2}}, {0, 0, 0}, 1);
    for (double l : lambdas) spectral_instance(tally, path, Matrix::Identity(3, 3), l, "path3");
  }
  const std::vector<Index> sizes{10, 20, 50, 100};
  for (Index n : sizes) {
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      Rng rng(seed, "theory-spectral", static_cast<std::uint64_t>(n), rep + 1);
      const Hypergraph h = random_hypergraph(n, n / 2 + 1, 6, 3, 1, rng);
      for (double l : lambdas) {
        spectral_instance(tally, h, h.features(), l, fmt("seed=%llu rep=%llu", static_cast<unsigned long long>(seed),
                                                          static_cast<unsigned long long>(rep)));
      }
    }
  }
  return tally.finish();
}

CheckResult check_tail() {
  Tally tally("tail");
  for (double lambda : {0.5, 1.0, 2.0, 3.0, 5.0, 10.0}) {
    for (double t : {1.0, 2.0, 3.0, 4.0}) {
      const TailCheck c = verify_tail_bound(lambda, t);
      tally.add(c.bound - c.exact, fmt("lambda=%g t=%g exact=%.6e bound=%.6e", lambda, t, c.exact, c.bound));
    }
  }
  return tally.finish();
}

CheckResult check_mmd_identity(std::uint64_t seed, int trials) {
  Tally tally("mmd");
  Rng rng(seed, "theory-mmd");
  for (int k = 0; k < trials; ++k) {
    const Index dim = 2 + static_cast<Index>(rng.uniform_index(15));
    const double scale_a = std::exp(rng.uniform(-3.0, 3.0));
    const double scale_b = std::exp(rng.uniform(-3.0, 3.0));
    const Vector a = scale_a * random_unit(dim, rng) * rng.uniform(0.5, 2.0);
    const Vector b = scale_b * random_unit(dim, rng) * rng.uniform(0.5, 2.0);
    const double lhs = 1.0 - a.dot(b) / (a.norm() * b.norm());
    const double rhs = 0.5 * (a / a.norm() - b / b.norm()).squaredNorm();
    tally.add(1e-10 - std::abs(lhs - rhs), fmt("trial=%d dim=%ld lhs=%.17g rhs=%.17g", k, static_cast<long>(dim), lhs, rhs));
  }
  return tally.finish();
}

CheckResult check_margin(std::uint64_t seed, int trials) {
  Tally tally("margin");
  for (int c : {3, 7}) {
    Rng rng(seed, "theory-margin", static_cast<std::uint64_t>(c));
    for (int k = 0; k < trials; ++k) {
      const Index dim = c + static_cast<Index>(rng.uniform_index(8));
      const int family = k % 3;
      std::vector<Vector> u(c), v(c);
      for (int i = 0; i < c; ++i) u[i] = random_unit(dim, rng);
      if (family == 0) {  // unrelated prototypes
        for (int i = 0; i < c; ++i) v[i] = random_unit(dim, rng);
      } else if (family == 1) {  // noisy matches
        const double noise = rng.uniform(0.0, 2.0);
        for (int i = 0; i < c; ++i) {
          Vector w = u[i] + noise * random_unit(dim, rng);
          v[i] = w.norm() > 0 ? Vector(w / w.norm()) : random_unit(dim, rng);
        }
      } else {  // one prototype repeated for every class
        const Vector w = random_unit(dim, rng);
        for (int i = 0; i < c; ++i) v[i] = w;
      }
      double eps = 0.0, margin = 0.0, diag = 0.0;
      for (int i = 0; i < c; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < c; ++j) {
          const double s = u[i].dot(v[j]);
          if (j == i) continue;
          eps += std::max(s, 0.0);
          best = std::max(best, s);
        }
        diag += u[i].dot(v[i]);
        margin += u[i].dot(v[i]) - best;
      }
      const double lhs = margin / c;
      const double rhs = diag / c - eps / c;
      // 1e-12 absorbs rounding in the sums; the inequality itself is exact.
      tally.add(lhs - rhs + 1e-12, fmt("C=%d trial=%d family=%d mean_margin=%.17g bound=%.17g", c, k, family, lhs, rhs));
    }
  }
  return tally.finish();
}

CheckResult check_misranking(std::uint64_t seed, int trials) {
  Tally tally("misrank");
  const char* names[] = {"gaussian-shift0", "gaussian-shift1", "gaussian-shift3", "uniform", "ties"};
  for (int negatives : {1, 5, 10, 50}) {
    for (int dist = 0; dist < 5; ++dist) {
      Rng rng(seed, "theory-misrank", static_cast<std::uint64_t>(negatives), static_cast<std::uint64_t>(dist));
      Matrix scores(1, negatives + 1);
      double sum_event = 0.0, sum_bound = 0.0, sum_sq_diff = 0.0;
      long pointwise = 0;
      for (int k = 0; k < trials; ++k) {
        for (int q = 0; q <= negatives; ++q) {
          double s = 0.0;
          switch (dist) {
            case 0: s = rng.normal(); break;
            case 1: s = rng.normal() + (q == 0 ? 1.0 : 0.0); break;
            case 2: s = rng.normal() + (q == 0 ? 3.0 : 0.0); break;
            case 3: s = rng.uniform(-2.0, 2.0); break;
            default: s = static_cast<double>(rng.uniform_index(3)) + (q == 0 ? 1.0 : 0.0); break;
          }
          scores(0, q) = s;
        }
        const bool event = (scores.row(0).tail(negatives).array() >= scores(0, 0)).any();
        const double bound = std::expm1(contrastive_terms(scores)[0]);
        if (event && bound < 1.0 - 1e-12) ++pointwise;
        const double diff = bound - (event ? 1.0 : 0.0);
        sum_event += event ? 1.0 : 0.0;
        sum_bound += bound;
        sum_sq_diff += diff * diff;
      }
      const double n = trials;
      const double mean_diff = (sum_bound - sum_event) / n;
      const double stderr_diff = std::sqrt(std::max(sum_sq_diff / n - mean_diff * mean_diff, 0.0) / n);
      const double slack = sum_bound / n + 3.0 * stderr_diff - sum_event / n;
      tally.add(pointwise == 0 ? slack : -1.0,
                fmt("N_neg=%d dist=%s Pr=%.6f bound=%.6f stderr=%.3e pointwise_violations=%ld", negatives,
                    names[dist], sum_event / n, sum_bound / n, stderr_diff, pointwise));
    }
  }
  return tally.finish();
}

std::vector<CheckResult> run_checks(const std::string& which, std::uint64_t seed) {
  static const std::vector<std::string> all{"spectral", "tail", "mmd", "margin", "misrank"};
  std::vector<std::string> selected;
  if (which == "all") {
    selected = all;
  } else if (std::find(all.begin(), all.end(), which) != all.end()) {
    selected = {which};
  } else if (which == "tail-bound") {
    selected = {"tail"};
  } else {
    throw Error(ErrorCode::ConfigError, "check: unknown check '" + which + "'");
  }
  std::vector<std::future<CheckResult>> futures;
  for (const std::string& name : selected) {
    futures.push_back(std::async(std::launch::async, [name, seed] {
      if (name == "spectral") return check_spectral(seed);
      if (name == "tail") return check_tail();
      if (name == "mmd") return check_mmd_identity(seed);
      if (name == "margin") return check_margin(seed);
      return check_misranking(seed);
    }));
  }
  std::vector<CheckResult> results;
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

nlohmann::json to_json(const CheckResult& r) {
  return {{"name", r.name},   {"trials", r.trials}, {"violations", r.violations},
          {"worst_margin", r.worst_margin}, {"pass", r.pass}, {"detail", r.detail}};
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << fmt("%-10s %8s %10s %14s  %s\n", "check", "trials", "violations", "worst_margin", "status");
  for (const CheckResult& r : results) {
    out << fmt("%-10s %8ld %10ld %14.6e  %s\n", r.name.c_str(), r.trials, r.violations, r.worst_margin,
               r.pass ? "PASS" : "FAIL");
    if (!r.pass) out << "  " << r.detail << "\n";
  }
  return out.str();
}

}  // namespace hypercondense
