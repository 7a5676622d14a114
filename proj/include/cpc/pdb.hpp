#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cpc/clock.hpp"
#include "cpc/pattern.hpp"
#include "cpc/sas_task.hpp"

namespace cpc {

/// Operator of a projected task. Facts index pattern positions, not task
/// variables.
struct AbstractOperator {
  PartialState pre;
  PartialState eff;
  Cost cost = 0;
};

struct AbstractTask {
  Pattern pattern;
  std::vector<int> domains;
  std::vector<AbstractOperator> operators;
  PartialState goal;
  std::vector<Value> initial;
};

/// Restricts the task to `pattern` under the given per-operator costs.
/// Operators with no effect left are dropped; operators that coincide after
/// projection are merged at their minimum cost.
AbstractTask project_task(const SasTask& task, const Pattern& pattern, std::span<const Cost> op_costs);

struct PdbLimits {
  std::uint64_t max_entries = 10'000'000;
  double time_budget = 30.0;  // seconds on the supplied clock
};

namespace detail {
struct AbstractSpace;
struct Frontier;
}  // namespace detail

/// Explicit pattern database: optimal abstract goal distances under the
/// partitioned operator costs it was built with.
///
/// A partial PDB answers `fallback_value()` for every abstract state its
/// regression search did not settle. Dijkstra settles states in cost order,
/// so every unsettled state is at least as far from the goal as the cheapest
/// open entry; the fallback is depth() + fallback_increment() with depth
/// chosen so the sum never exceeds that bound.
class Pdb {
 public:
  /// Sentinels in the 32-bit cost table.
  static constexpr std::uint32_t kUnvisited = 0xFFFFFFFFu;
  static constexpr std::uint32_t kUnreachable = 0xFFFFFFFEu;
  static constexpr std::uint32_t kMaxStoredCost = 0xFFFFFFFDu;

  const Pattern& pattern() const { return pattern_; }
  bool is_partial() const { return partial_; }
  Cost depth() const { return depth_; }
  Cost fallback_increment() const { return increment_; }
  Cost fallback_value() const { return fallback_; }
  std::span<const Cost> operator_costs() const { return op_costs_; }
  std::uint64_t num_abstract_states() const { return indexer_.size(); }
  bool is_dense() const { return dense_; }
  std::uint64_t settled_entries() const { return settled_; }
  std::size_t memory_bytes() const;
  bool can_resume() const { return partial_ && frontier_ != nullptr; }

  /// Goal distance of the abstraction of `s`; kInfiniteCost for dead ends.
  Cost lookup(const State& s) const { return lookup_rank(indexer_.rank(pattern_.vars(), s)); }
  Cost lookup_rank(std::uint64_t rank) const;
  /// Settled table value at `rank`, or nullopt when the search did not settle it.
  std::optional<Cost> stored_value(std::uint64_t rank) const;

  const PatternIndexer& indexer() const { return indexer_; }

  void save(std::ostream& out) const;
  static Pdb load(std::istream& in);

 private:
  friend class RegressionSearch;

  Pattern pattern_;
  PatternIndexer indexer_;
  std::vector<Cost> op_costs_;
  std::shared_ptr<const detail::AbstractSpace> space_;
  bool dense_ = true;
  std::vector<std::uint32_t> table_;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
  std::uint64_t settled_ = 0;
  bool partial_ = false;
  Cost depth_ = 0;
  Cost increment_ = 0;
  Cost fallback_ = 0;
  std::shared_ptr<const detail::Frontier> frontier_;
};

/// Backward Dijkstra from all abstract goal states. Returns nullopt when the
/// abstract space cannot be indexed or the goal states alone exceed
/// `limits.max_entries`.
std::optional<Pdb> build_pdb(const SasTask& task, const Pattern& pattern, std::span<const Cost> op_costs,
                             const PdbLimits& limits, Clock& clock);

/// Continues the regression search of a partial PDB from its saved frontier.
/// Returns the input unchanged when it cannot be resumed.
Pdb resume_pdb(const Pdb& pdb, const PdbLimits& limits, Clock& clock);

/// Per-pattern operator costs under zero-one partitioning: each operator
/// keeps its cost in the first pattern (in the given order) its effects
/// touch and costs zero everywhere else.
std::vector<std::vector<Cost>> apply_zero_one_partition(const SasTask& task, std::span<const Pattern> patterns);

/// Original operator costs, for single-pattern builds.
std::vector<Cost> original_costs(const SasTask& task);

}  // namespace cpc
