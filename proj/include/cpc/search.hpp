#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpc/clock.hpp"
#include "cpc/collection.hpp"
#include "cpc/sas_task.hpp"

namespace cpc {

enum class SearchStatus { kSolved, kUnsolvable, kLimitExceeded };

std::string to_string(SearchStatus s);

struct SearchLimits {
  double time = 1e300;                       // seconds on the supplied clock
  double memory_bytes = 1e300;               // estimated
  std::uint64_t max_expansions = UINT64_MAX;
  const std::atomic<bool>* abort_flag = nullptr;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kUnsolvable;
  std::vector<std::size_t> plan;  // operator indices
  Cost cost = 0;
  std::uint64_t expansions = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t generated = 0;
  double search_time = 0.0;
  double peak_memory_bytes = 0.0;
  Cost initial_h = 0;

  bool solved() const { return status == SearchStatus::kSolved; }
};

/// A* over the original state space. Ties on f prefer larger g, then
/// insertion order. States are closed on first expansion, which is optimal
/// for consistent heuristics; dead ends (infinite h) are never queued.
SearchResult astar_search(const SasTask& task, const std::function<Cost(const State&)>& heuristic,
                          const SearchLimits& limits, Clock& clock);
SearchResult astar_search(const SasTask& task, const CollectionSet& heuristic, const SearchLimits& limits,
                          Clock& clock);

struct PlanValidation {
  bool valid = false;
  Cost cost = 0;
  std::string reason;
};

/// Replays `plan` (operator names) from the initial state.
PlanValidation validate_plan(const SasTask& task, const std::vector<std::string>& plan);

std::vector<std::string> plan_names(const SasTask& task, const std::vector<std::size_t>& plan);

/// IPC layout: one "(name)" line per step, then "; cost = C (general cost)"
/// (or "unit cost" for unit-cost tasks).
void write_plan(std::ostream& out, const std::vector<std::string>& plan, Cost cost, bool unit_cost = false);

/// Reads operator names back from IPC plan text; comment lines are skipped.
std::vector<std::string> read_plan(std::istream& in);

}  // namespace cpc
