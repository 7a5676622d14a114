#pragma once

// Test-side oracles. Everything here works on the explicit state space and
// shares no code with the library beyond the task model.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cpc/sas_task.hpp"

namespace cpc::testing {

struct RandomTaskParams {
  int min_vars = 4;
  int max_vars = 8;
  int min_domain = 2;
  int max_domain = 4;
  int min_ops = 5;
  int max_ops = 15;
  int max_cost = 5;  // costs drawn from [0, max_cost]; 0 only with some probability
};

/// Random task with random preconditions/effects. Goal is a random nonempty
/// subset of variables.
SasTask random_task(std::mt19937_64& gen, const RandomTaskParams& params = {});

/// Random task whose goal is reachable from the initial state.
SasTask random_solvable_task(std::mt19937_64& gen, const RandomTaskParams& params = {});

/// Explicit state space, states indexed by mixed-radix rank over all variables.
class StateSpace {
 public:
  explicit StateSpace(const SasTask& task);

  std::uint64_t size() const { return size_; }
  std::uint64_t index(const State& s) const;
  State state(std::uint64_t index) const;

  /// Goal distance of every state; nullopt for dead ends.
  const std::vector<std::optional<Cost>>& goal_distances() const { return h_star_; }
  std::optional<Cost> h_star(const State& s) const { return h_star_[index(s)]; }

  /// States reachable from the initial state.
  const std::vector<bool>& reachable() const { return reachable_; }
  std::size_t num_reachable() const;

 private:
  const SasTask& task_;
  std::vector<std::uint64_t> mult_;
  std::uint64_t size_ = 1;
  std::vector<std::optional<Cost>> h_star_;
  std::vector<bool> reachable_;
};

/// Cheapest plan cost by forward Dijkstra, nullopt when unsolvable.
std::optional<Cost> optimal_cost(const SasTask& task);

/// Exact goal distances of every abstract state of `pattern` (indexed by the
/// mixed-radix rank with the first pattern variable least significant),
/// computed by enumerating abstract transitions of the original operators
/// under `op_costs`. nullopt marks abstract dead ends.
std::vector<std::optional<Cost>> abstract_distances(const SasTask& task, const std::vector<int>& pattern,
                                                    const std::vector<Cost>& op_costs);

/// The two-variable task used throughout: A,B in {0,1}, o1 sets A (cost 2),
/// o2 sets B (cost 3), goal A=1,B=1.
SasTask toy_task();

/// Builds a translator-format file for `task`.
std::string to_sas_text(const SasTask& task);

/// Fixture directory configured by the build.
std::string fixture_path(const std::string& name);

}  // namespace cpc::testing
