#pragma once

#include <vector>

#include "cpc/causal_graph.hpp"
#include "cpc/pattern.hpp"
#include "cpc/random.hpp"
#include "cpc/sas_task.hpp"

namespace cpc {

enum class PackingOrder { kDecreasing, kIncreasing };

/// True iff adding a variable of `domain` to a bin of `bin_size` keeps the
/// product strictly below `size_limit`.
inline bool has_space(double bin_size, int domain, double size_limit) {
  return bin_size * static_cast<double>(domain) < size_limit;
}

/// Next-Fit bin packing (NFD for kDecreasing, NFI for kIncreasing).
///
/// Candidates are the variables with domain size below `size_limit`, sorted
/// by domain size (ties by ascending id). Each candidate is placed into the
/// open bin, closing it first when it has no space left; then the remaining
/// candidates related to it in the causal graph are shuffled and absorbed
/// while they fit.
std::vector<Pattern> next_fit_pack(const SasTask& task, const CausalGraph& graph, PackingOrder order,
                                   double size_limit, Rng& rng);

/// Causal Dependency bin packing.
///
/// Every bin is seeded with up to `goals_per_bin` randomly chosen goal
/// variables (a drawn goal variable that does not fit is returned to the
/// pool) and then grows by absorbing shuffled causally related variables
/// that fit, pulling in their own relatives as it goes. Bins are returned
/// longest first.
std::vector<Pattern> cbp_pack(const SasTask& task, const CausalGraph& graph, int goals_per_bin, double size_limit,
                              Rng& rng);

}  // namespace cpc
