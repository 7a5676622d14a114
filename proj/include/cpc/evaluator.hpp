#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cpc/clock.hpp"
#include "cpc/collection.hpp"
#include "cpc/random.hpp"
#include "cpc/sas_task.hpp"

namespace cpc {

struct SampleLimits {
  std::size_t max_states = 10'000;
  double time = 30.0;
};

/// Random-walk sample with the current heuristic value of every state.
struct SampleSet {
  std::vector<State> states;
  std::vector<Cost> stored_h;
  Cost init_h_at_sampling = 0;
  double resample_time_spent = 0.0;
  bool init_dead_end = false;

  std::size_t size() const { return states.size(); }
};

using HeuristicFn = std::function<Cost(const State&)>;

/// Mean strictly-positive operator cost, 1 when there is none.
double mean_positive_cost(const SasTask& task);

/// Collects walk endpoints from the initial state until `limits` are hit
/// and deduplicates them. Walk lengths follow Binomial(2*ceil(h0/c), 1/2)
/// (at least 1) where h0 is the heuristic of the initial state and c the
/// mean positive operator cost. A step into a state `h` reports as a dead
/// end, or a state without applicable operators, restarts the walk at the
/// initial state.
SampleSet draw_sample(const SasTask& task, const HeuristicFn& h, Rng& rng, const SampleLimits& limits, Clock& clock);
SampleSet draw_sample(const SasTask& task, const CollectionSet& set, Rng& rng, const SampleLimits& limits,
                      Clock& clock);

/// Inclusive 25% rule: improved / m >= 0.25, evaluated exactly.
bool meets_improvement_ratio(std::size_t improved, std::size_t m);

/// Sample states where `candidate` strictly beats the stored value.
std::size_t count_improved(const SampleSet& sample, const PdbCollection& candidate);
bool should_add(const SampleSet& sample, const PdbCollection& candidate);

struct CommitResult {
  bool resample_trigger = false;
  std::size_t removed_dead_ends = 0;
  Cost init_h = 0;
};

/// True iff `after` exceeds `before` by more than 10%.
bool rose_over_ten_percent(Cost before, Cost after);

/// Appends `candidate` to `set`, raises stored values pointwise and drops
/// sample states that became dead ends (the initial state is kept).
CommitResult commit_addition(const SasTask& task, SampleSet& sample, CollectionSet& set, PdbCollection candidate);

/// Redraws the sample when triggered; the time spent is added to
/// `resample_time_spent`. Returns whether a new sample was drawn.
bool maybe_resample(const SasTask& task, SampleSet& sample, bool trigger, const CollectionSet& set, Rng& rng,
                    const SampleLimits& limits, Clock& clock);

/// Recomputes stored values from scratch and removes dead ends.
void refresh_stored_h(const SasTask& task, SampleSet& sample, const CollectionSet& set);

/// Backward dominance scan over per-collection heuristic vectors (one row
/// per collection, one column per sample state). Returns the indices of the
/// surviving collections in ascending order.
std::vector<std::size_t> dominance_survivors(const std::vector<std::vector<Cost>>& h_rows);

/// Removes collections that exceed the running maximum of the collections
/// kept after them on no sample state.
void prune_dominated(CollectionSet& set, const SampleSet& sample);

}  // namespace cpc
