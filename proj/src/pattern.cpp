#include "cpc/pattern.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpc {

Pattern::Pattern(std::vector<int> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  if (vars_.empty()) throw std::invalid_argument("pattern must not be empty");
}

bool Pattern::contains(int var) const { return std::binary_search(vars_.begin(), vars_.end(), var); }

std::string Pattern::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(vars_[i]);
  }
  return s + "}";
}

double pattern_size(const SasTask& task, std::span<const int> vars) {
  double size = 1.0;
  for (int v : vars) size *= static_cast<double>(task.domain_size(v));
  return size;
}

std::optional<PatternIndexer> PatternIndexer::create(const SasTask& task, const Pattern& pattern) {
  std::vector<int> domains;
  domains.reserve(pattern.length());
  for (int v : pattern.vars()) domains.push_back(task.domain_size(v));
  return create(std::move(domains));
}

std::optional<PatternIndexer> PatternIndexer::create(std::vector<int> domains) {
  constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 63;
  PatternIndexer idx;
  idx.multipliers_.reserve(domains.size());
  for (int d : domains) {
    idx.multipliers_.push_back(idx.size_);
    const auto dom = static_cast<std::uint64_t>(d);
    if (dom != 0 && idx.size_ > kMaxSize / dom) return std::nullopt;
    idx.size_ *= dom;
  }
  idx.domains_ = std::move(domains);
  return idx;
}

std::uint64_t PatternIndexer::rank(std::span<const int> vars, const State& s) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    index += static_cast<std::uint64_t>(s[static_cast<std::size_t>(vars[i])]) * multipliers_[i];
  }
  return index;
}

std::uint64_t PatternIndexer::rank_abstract(std::span<const Value> abstract) const {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < abstract.size(); ++i) {
    index += static_cast<std::uint64_t>(abstract[i]) * multipliers_[i];
  }
  return index;
}

std::vector<Value> PatternIndexer::unrank(std::uint64_t index) const {
  std::vector<Value> out(domains_.size());
  for (std::size_t i = 0; i < domains_.size(); ++i) out[i] = value_at(index, i);
  return out;
}

}  // namespace cpc
