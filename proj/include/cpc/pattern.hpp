#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpc/sas_task.hpp"

namespace cpc {

/// Nonempty, strictly increasing set of variable ids.
class Pattern {
 public:
  Pattern() = default;
  /// Sorts and deduplicates. Throws std::invalid_argument when empty.
  explicit Pattern(std::vector<int> vars);

  const std::vector<int>& vars() const { return vars_; }
  std::size_t length() const { return vars_.size(); }
  bool contains(int var) const;
  bool empty() const { return vars_.empty(); }

  std::string to_string() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;

 private:
  std::vector<int> vars_;
};

/// Number of abstract states, as a double: exact below 2^53 and monotone
/// beyond, which is all the size-limit comparisons need.
double pattern_size(const SasTask& task, std::span<const int> vars);
inline double pattern_size(const SasTask& task, const Pattern& p) { return pattern_size(task, p.vars()); }

/// Mixed-radix ranking of abstract states:
/// rank(s) = sum_i s[v_i] * prod_{j<i} |D_{v_j}|.
class PatternIndexer {
 public:
  /// nullopt when the abstract space does not fit a 63-bit index.
  static std::optional<PatternIndexer> create(const SasTask& task, const Pattern& pattern);
  static std::optional<PatternIndexer> create(std::vector<int> domains);

  std::uint64_t size() const { return size_; }
  std::size_t length() const { return domains_.size(); }
  std::span<const int> domains() const { return domains_; }
  std::span<const std::uint64_t> multipliers() const { return multipliers_; }

  /// `s` is a full state; `vars` the pattern the indexer was built for.
  std::uint64_t rank(std::span<const int> vars, const State& s) const;
  /// Rank of an abstract state given as one value per pattern position.
  std::uint64_t rank_abstract(std::span<const Value> abstract) const;
  std::vector<Value> unrank(std::uint64_t index) const;

  Value value_at(std::uint64_t index, std::size_t pos) const {
    return static_cast<Value>((index / multipliers_[pos]) % static_cast<std::uint64_t>(domains_[pos]));
  }

 private:
  std::vector<int> domains_;
  std::vector<std::uint64_t> multipliers_;
  std::uint64_t size_ = 1;
};

}  // namespace cpc
