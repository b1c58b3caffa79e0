#pragma once

#include <span>
#include <string>
#include <vector>

#include "hypercondense/hypergraph.hpp"
#include "hypercondense/matrix.hpp"
#include "hypercondense/rng.hpp"

namespace hypercondense {

enum class CoresetMethod { Random, Herding, KCenter };

CoresetMethod parse_coreset_method(const std::string& name);
std::string to_string(CoresetMethod m);

/// Training nodes selected per class with the same quotas as the synthetic
/// label allocation. Herding and K-Center work on `diffused` features.
/// Output is grouped by class (ascending), in selection order within a class.
std::vector<Index> select_coreset(const Hypergraph& h, const Matrix& diffused, double ratio,
                                  CoresetMethod method, Rng& rng);

/// Per-class pickers, exposed for tests. `points` are the candidates' rows.
std::vector<Index> herding_order(const Matrix& points, Index count);
std::vector<Index> kcenter_order(const Matrix& points, Index count);

/// Sub-hypergraph on `nodes` (all of which must be training nodes): input
/// hyperedges restricted to the selection, empty restrictions dropped. Every
/// node of the result is a training node.
Hypergraph induced_subhypergraph(const Hypergraph& h, std::span<const Index> nodes);

}  // namespace hypercondense
