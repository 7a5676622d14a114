#include "cpc/causal_graph.hpp"

#include <algorithm>

namespace cpc {

namespace {

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

CausalGraph::CausalGraph(const SasTask& task)
    : successors_(task.num_variables()), predecessors_(task.num_variables()), related_(task.num_variables()) {
  for (const Operator& op : task.operators) {
    for (const Fact& target : op.eff) {
      auto add_arc = [&](int from) {
        if (from == target.var) return;
        successors_[static_cast<std::size_t>(from)].push_back(target.var);
        predecessors_[static_cast<std::size_t>(target.var)].push_back(from);
      };
      for (const Fact& f : op.pre) add_arc(f.var);
      for (const Fact& f : op.eff) add_arc(f.var);
    }
  }
  for (std::size_t v = 0; v < successors_.size(); ++v) {
    sort_unique(successors_[v]);
    sort_unique(predecessors_[v]);
    related_[v] = successors_[v];
    related_[v].insert(related_[v].end(), predecessors_[v].begin(), predecessors_[v].end());
    sort_unique(related_[v]);
  }
}

bool CausalGraph::has_arc(int from, int to) const {
  const auto& succ = successors_[static_cast<std::size_t>(from)];
  return std::binary_search(succ.begin(), succ.end(), to);
}

bool CausalGraph::are_related(int a, int b) const {
  const auto& rel = related_[static_cast<std::size_t>(a)];
  return std::binary_search(rel.begin(), rel.end(), b);
}

std::vector<int> causally_related_vars(const CausalGraph& graph, std::span<const int> vars) {
  std::vector<char> member(graph.num_variables(), 0);
  for (int v : vars) member[static_cast<std::size_t>(v)] = 1;
  std::vector<char> hit(graph.num_variables(), 0);
  for (int v : vars) {
    for (int u : graph.related(v)) {
      if (!member[static_cast<std::size_t>(u)]) hit[static_cast<std::size_t>(u)] = 1;
    }
  }
  std::vector<int> out;
  for (std::size_t v = 0; v < hit.size(); ++v) {
    if (hit[v]) out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace cpc
