#include "cpc/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_set>

namespace cpc {

double mean_positive_cost(const SasTask& task) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const Operator& op : task.operators) {
    if (op.cost > 0) {
      sum += static_cast<double>(op.cost);
      ++count;
    }
  }
  return count == 0 ? 1.0 : sum / static_cast<double>(count);
}

SampleSet draw_sample(const SasTask& task, const HeuristicFn& h, Rng& rng, const SampleLimits& limits, Clock& clock) {
  SampleSet sample;
  const double start = clock.now();
  const Cost h0 = h(task.initial);
  sample.init_h_at_sampling = h0;

  if (h0 == kInfiniteCost) {
    sample.init_dead_end = true;
    sample.states.push_back(task.initial);
    sample.stored_h.push_back(h0);
    return sample;
  }

  const double unit = mean_positive_cost(task);
  const auto trials = static_cast<std::uint64_t>(2.0 * std::ceil(static_cast<double>(h0) / unit));
  const std::size_t max_states = std::max<std::size_t>(limits.max_states, 1);

  std::vector<State> endpoints;
  std::vector<std::size_t> applicable;
  while (endpoints.size() < max_states && clock.now() - start < limits.time) {
    const std::uint64_t length = std::max<std::uint64_t>(1, rng.binomial_half(trials));
    State s = task.initial;
    for (std::uint64_t step = 0; step < length; ++step) {
      applicable.clear();
      for (std::size_t o = 0; o < task.operators.size(); ++o) {
        if (is_applicable(s, task.operators[o])) applicable.push_back(o);
      }
      clock.charge(1);
      if (applicable.empty()) {
        s = task.initial;
        continue;
      }
      const auto& op = task.operators[applicable[rng.uniform_index(applicable.size())]];
      State next = *apply_operator(s, op);
      if (h(next) == kInfiniteCost) {
        s = task.initial;
      } else {
        s = std::move(next);
      }
    }
    endpoints.push_back(std::move(s));
  }

  std::unordered_set<State, StateHash> seen;
  for (State& s : endpoints) {
    if (seen.insert(s).second) sample.states.push_back(std::move(s));
  }
  if (sample.states.empty()) sample.states.push_back(task.initial);
  sample.stored_h.reserve(sample.states.size());
  for (const State& s : sample.states) sample.stored_h.push_back(h(s));
  return sample;
}

SampleSet draw_sample(const SasTask& task, const CollectionSet& set, Rng& rng, const SampleLimits& limits,
                      Clock& clock) {
  return draw_sample(
      task, [&set](const State& s) { return max_heuristic(set, s); }, rng, limits, clock);
}

bool meets_improvement_ratio(std::size_t improved, std::size_t m) {
  // improved / m >= 1/4 without floating point.
  return m > 0 && 4 * improved >= m;
}

std::size_t count_improved(const SampleSet& sample, const PdbCollection& candidate) {
  std::size_t improved = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (collection_heuristic(candidate, sample.states[i]) > sample.stored_h[i]) ++improved;
  }
  return improved;
}

bool should_add(const SampleSet& sample, const PdbCollection& candidate) {
  return meets_improvement_ratio(count_improved(sample, candidate), sample.size());
}

bool rose_over_ten_percent(Cost before, Cost after) {
  if (after == kInfiniteCost) return before != kInfiniteCost;
  if (before == kInfiniteCost) return false;
  return static_cast<__int128>(after) * 10 > static_cast<__int128>(before) * 11;
}

namespace {

std::size_t drop_dead_ends(const SasTask& task, SampleSet& sample) {
  std::size_t removed = 0;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const bool dead = sample.stored_h[i] == kInfiniteCost;
    if (dead && sample.states[i] != task.initial) {
      ++removed;
      continue;
    }
    if (keep != i) {
      sample.states[keep] = std::move(sample.states[i]);
      sample.stored_h[keep] = sample.stored_h[i];
    }
    ++keep;
  }
  sample.states.resize(keep);
  sample.stored_h.resize(keep);
  return removed;
}

}  // namespace

CommitResult commit_addition(const SasTask& task, SampleSet& sample, CollectionSet& set, PdbCollection candidate) {
  CommitResult result;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    sample.stored_h[i] = std::max(sample.stored_h[i], collection_heuristic(candidate, sample.states[i]));
  }
  set.add(std::move(candidate));
  result.removed_dead_ends = drop_dead_ends(task, sample);
  if (sample.states.empty()) {
    sample.states.push_back(task.initial);
    sample.stored_h.push_back(max_heuristic(set, task.initial));
  }
  result.init_h = max_heuristic(set, task.initial);
  if (result.init_h == kInfiniteCost) sample.init_dead_end = true;
  result.resample_trigger = rose_over_ten_percent(sample.init_h_at_sampling, result.init_h);
  return result;
}

bool maybe_resample(const SasTask& task, SampleSet& sample, bool trigger, const CollectionSet& set, Rng& rng,
                    const SampleLimits& limits, Clock& clock) {
  if (!trigger) return false;
  const double start = clock.now();
  const double spent = sample.resample_time_spent;
  sample = draw_sample(task, set, rng, limits, clock);
  sample.resample_time_spent = spent + (clock.now() - start);
  return true;
}

void refresh_stored_h(const SasTask& task, SampleSet& sample, const CollectionSet& set) {
  for (std::size_t i = 0; i < sample.size(); ++i) sample.stored_h[i] = max_heuristic(set, sample.states[i]);
  drop_dead_ends(task, sample);
  if (sample.states.empty()) {
    sample.states.push_back(task.initial);
    sample.stored_h.push_back(max_heuristic(set, task.initial));
  }
}

std::vector<std::size_t> dominance_survivors(const std::vector<std::vector<Cost>>& h_rows) {
  std::vector<std::size_t> kept;
  if (h_rows.empty()) return kept;
  // Running maximum over kept collections; nullopt until the first one.
  std::vector<std::optional<Cost>> running(h_rows.front().size());
  for (std::size_t k = h_rows.size(); k-- > 0;) {
    const auto& row = h_rows[k];
    bool exceeds = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!running[i] || row[i] > *running[i]) {
        exceeds = true;
        break;
      }
    }
    // An empty sample gives no evidence; only the newest collection survives.
    if (row.empty() && kept.empty()) exceeds = true;
    if (!exceeds) continue;
    kept.push_back(k);
    for (std::size_t i = 0; i < row.size(); ++i) running[i] = running[i] ? std::max(*running[i], row[i]) : row[i];
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

void prune_dominated(CollectionSet& set, const SampleSet& sample) {
  std::vector<std::vector<Cost>> rows;
  rows.reserve(set.size());
  for (const auto& c : set.collections()) {
    std::vector<Cost> row;
    row.reserve(sample.size());
    for (const State& s : sample.states) row.push_back(collection_heuristic(c, s));
    rows.push_back(std::move(row));
  }
  const auto kept = dominance_survivors(rows);
  std::vector<PdbCollection> survivors;
  survivors.reserve(kept.size());
  for (std::size_t k : kept) survivors.push_back(std::move(set.collections()[k]));
  set.collections() = std::move(survivors);
}

}  // namespace cpc
