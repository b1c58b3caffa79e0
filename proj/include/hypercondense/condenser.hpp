#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hypercondense/config.hpp"
#include "hypercondense/hypergraph.hpp"
#include "hypercondense/losses.hpp"
#include "hypercondense/matrix.hpp"
#include "hypercondense/rng.hpp"
#include "hypercondense/structure_generator.hpp"

namespace hypercondense {

/// Synthetic hypergraph: N' nodes, N' anchor hyperedges.
struct CondensedHypergraph {
  Matrix features;   // N' x d
  Matrix incidence;  // N' x N', row = anchor hyperedge, column = member node
  std::vector<int> labels;
  int num_classes = 0;

  Index num_nodes() const { return features.rows(); }
};

/// N' = round(r N) labels apportioned by largest remainder over the training
/// class histogram, at least one per class, sorted by class.
/// Throws TooFewSyntheticNodes when N' < C.
std::vector<int> synthesize_labels(const Hypergraph& h, double ratio);
/// Same allocation given explicit per-class training counts.
std::vector<std::int64_t> allocate_synthetic(Index total, const std::vector<std::int64_t>& class_counts);

/// Row i = mean of `samples` diffused training features of class labels[i],
/// drawn without replacement when the class has enough training nodes.
Matrix init_features(const Hypergraph& h, const Matrix& diffused, std::span<const int> labels,
                     int samples, Rng& rng);

struct EpochLog {
  int epoch = 0;
  bool updated_features = false;  // otherwise the structure group moved
  double coarse_weight = 0.0;
  double fine_weight = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  double total = 0.0;
};

struct Condensation {
  CondensedHypergraph graph;
  StructureParams structure;
  std::vector<EpochLog> trajectory;
};

/// Called after every optimiser step with the current parameters.
using EpochHook = std::function<void(int epoch, const Matrix& features, const StructureParams& structure)>;

/// Objective at fixed parameters, as used inside the loop. Exposed for
/// gradient checks: returns (coarse, fine, total) on `tape`.
struct ObjectiveTerms {
  ad::Var coarse;
  ad::Var fine;
  ad::Var total;
};

struct ObjectiveContext {
  const Matrix* original_prototypes = nullptr;  // C x d
  const Matrix* diffused = nullptr;             // N x d, original side
  const std::vector<int>* labels = nullptr;     // y'
  const PoissonWeights* weights = nullptr;
  int num_classes = 0;
};

ObjectiveTerms condensation_objective(const ad::Var& features, const StructureVars& structure,
                                      const ObjectiveContext& ctx, const ContrastiveDraw& draw,
                                      double coarse_weight, double fine_weight);

/// Runs the alternating optimisation for set `set_index`. `diffused` is the
/// diffusion of the original features, computed once by the caller.
Condensation condense(const Hypergraph& h, const Matrix& diffused, const RunConfig& cfg, int set_index,
                      const EpochHook& hook = {});
/// Convenience overload that diffuses first.
Condensation condense(const Hypergraph& h, const RunConfig& cfg, int set_index);

/// Diffusion of the original features under cfg's lambda and order.
Matrix diffuse_original(const Hypergraph& h, const RunConfig& cfg);

}  // namespace hypercondense
