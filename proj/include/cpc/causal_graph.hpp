#pragma once

#include <span>
#include <vector>

#include "cpc/sas_task.hpp"

namespace cpc {

/// Directed causal graph of a task plus its symmetric closure.
/// Arc (u, v) exists iff some operator has an effect on v and a
/// precondition or effect on u, with u != v.
class CausalGraph {
 public:
  explicit CausalGraph(const SasTask& task);

  std::size_t num_variables() const { return successors_.size(); }

  /// Sorted, duplicate-free.
  std::span<const int> successors(int var) const { return successors_[static_cast<std::size_t>(var)]; }
  std::span<const int> predecessors(int var) const { return predecessors_[static_cast<std::size_t>(var)]; }
  /// Variables connected to `var` by an arc in either direction.
  std::span<const int> related(int var) const { return related_[static_cast<std::size_t>(var)]; }

  bool has_arc(int from, int to) const;
  bool are_related(int a, int b) const;

 private:
  std::vector<std::vector<int>> successors_;
  std::vector<std::vector<int>> predecessors_;
  std::vector<std::vector<int>> related_;
};

/// All variables outside `vars` that are related to at least one member of
/// `vars`, in ascending id order.
std::vector<int> causally_related_vars(const CausalGraph& graph, std::span<const int> vars);

}  // namespace cpc
