#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpc {

using Value = int;
using Cost = std::int64_t;

/// Heuristic value reserved for proven dead ends.
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

/// Saturating addition over heuristic values; anything plus infinity is infinity.
constexpr Cost add_costs(Cost a, Cost b) {
  if (a == kInfiniteCost || b == kInfiniteCost) return kInfiniteCost;
  if (a > kInfiniteCost - 1 - b) return kInfiniteCost - 1;
  return a + b;
}

using State = std::vector<Value>;

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Value v : s) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct Fact {
  int var = 0;
  Value value = 0;

  friend bool operator==(const Fact&, const Fact&) = default;
  friend auto operator<=>(const Fact&, const Fact&) = default;
};

/// Assignment to a subset of variables, kept sorted by variable id.
using PartialState = std::vector<Fact>;

struct Variable {
  std::string name;
  int domain_size = 1;
  std::vector<std::string> value_names;
};

struct Operator {
  std::string name;
  PartialState pre;
  PartialState eff;
  Cost cost = 0;
};

struct SasTask {
  std::vector<Variable> variables;
  std::vector<Operator> operators;
  State initial;
  PartialState goal;
  bool unit_cost = false;  // metric flag was 0 in the input

  std::size_t num_variables() const { return variables.size(); }
  int domain_size(int var) const { return variables[static_cast<std::size_t>(var)].domain_size; }
  std::vector<int> goal_variables() const;
  bool is_goal(const State& s) const;
};

class SasError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. `line()` is 1-based.
class SasSyntaxError : public SasError {
 public:
  SasSyntaxError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input using a feature this planner does not handle
/// (axioms, conditional effects, derived variables).
class SasUnsupportedError : public SasError {
 public:
  using SasError::SasError;
};

class SasValidationError : public SasError {
 public:
  using SasError::SasError;
};

SasTask parse_sas(std::istream& in);
SasTask parse_sas_string(std::string_view text);
SasTask parse_sas_file(const std::filesystem::path& path);

/// Throws SasValidationError on the first violated invariant.
void validate_task(const SasTask& task);

bool is_applicable(const State& s, const Operator& op);

/// Successor state, or nullopt when `op` is inapplicable in `s`.
std::optional<State> apply_operator(const State& s, const Operator& op);

/// Writes a deterministic human-readable dump of the task.
void dump_task(const SasTask& task, std::ostream& out);

}  // namespace cpc
