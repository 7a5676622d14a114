#include "cpc/search.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <unordered_map>

namespace cpc {

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::kSolved: return "solved";
    case SearchStatus::kUnsolvable: return "unsolvable";
    case SearchStatus::kLimitExceeded: return "limit-exceeded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct Node {
  State state;
  Cost g = 0;
  Cost h = 0;
  std::size_t parent = kNoParent;
  std::size_t op = 0;
  bool closed = false;
};

struct OpenEntry {
  Cost f;
  Cost g;
  std::uint64_t order;
  std::size_t node;
};

// Priority: lowest f, then highest g, then FIFO.
struct OpenCompare {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.order > b.order;
  }
};

}  // namespace

SearchResult astar_search(const SasTask& task, const std::function<Cost(const State&)>& heuristic,
                          const SearchLimits& limits, Clock& clock) {
  SearchResult result;
  const double start = clock.now();
  const double bytes_per_node =
      static_cast<double>(task.num_variables() * sizeof(Value) + sizeof(Node) + sizeof(OpenEntry) + 48);

  std::vector<Node> nodes;
  std::unordered_map<State, std::size_t, StateHash> index;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenCompare> open;
  std::uint64_t order = 0;

  auto finish = [&](SearchStatus status) {
    result.status = status;
    result.search_time = clock.now() - start;
    result.peak_memory_bytes = std::max(result.peak_memory_bytes, static_cast<double>(nodes.size()) * bytes_per_node);
    return result;
  };

  const Cost h0 = heuristic(task.initial);
  ++result.evaluated;
  result.initial_h = h0;
  if (h0 == kInfiniteCost) return finish(SearchStatus::kUnsolvable);
  nodes.push_back({task.initial, 0, h0, kNoParent, 0, false});
  index.emplace(task.initial, 0);
  open.push({h0, 0, order++, 0});

  while (!open.empty()) {
    if (clock.now() - start >= limits.time || result.expansions >= limits.max_expansions ||
        static_cast<double>(nodes.size()) * bytes_per_node >= limits.memory_bytes ||
        (limits.abort_flag && limits.abort_flag->load())) {
      return finish(SearchStatus::kLimitExceeded);
    }
    const OpenEntry top = open.top();
    open.pop();
    Node& node = nodes[top.node];
    if (node.closed || top.g > node.g) continue;
    node.closed = true;

    if (task.is_goal(node.state)) {
      result.cost = node.g;
      for (std::size_t n = top.node; nodes[n].parent != kNoParent; n = nodes[n].parent) result.plan.push_back(nodes[n].op);
      std::reverse(result.plan.begin(), result.plan.end());
      return finish(SearchStatus::kSolved);
    }
    ++result.expansions;
    clock.charge(1);

    const State current = node.state;
    const Cost g = node.g;
    for (std::size_t o = 0; o < task.operators.size(); ++o) {
      const Operator& op = task.operators[o];
      if (!is_applicable(current, op)) continue;
      State next = current;
      for (const Fact& f : op.eff) next[static_cast<std::size_t>(f.var)] = f.value;
      ++result.generated;
      const Cost ng = g + op.cost;
      auto it = index.find(next);
      if (it != index.end()) {
        Node& known = nodes[it->second];
        if (known.closed || ng >= known.g) continue;
        known.g = ng;
        known.parent = top.node;
        known.op = o;
        open.push({add_costs(ng, known.h), ng, order++, it->second});
        continue;
      }
      const Cost h = heuristic(next);
      ++result.evaluated;
      if (h == kInfiniteCost) continue;
      const std::size_t id = nodes.size();
      index.emplace(next, id);
      nodes.push_back({std::move(next), ng, h, top.node, o, false});
      open.push({add_costs(ng, h), ng, order++, id});
    }
  }
  return finish(SearchStatus::kUnsolvable);
}

SearchResult astar_search(const SasTask& task, const CollectionSet& heuristic, const SearchLimits& limits,
                          Clock& clock) {
  return astar_search(
      task, [&heuristic](const State& s) { return max_heuristic(heuristic, s); }, limits, clock);
}

PlanValidation validate_plan(const SasTask& task, const std::vector<std::string>& plan) {
  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t o = 0; o < task.operators.size(); ++o) by_name.emplace(task.operators[o].name, o);

  PlanValidation v;
  State s = task.initial;
  for (std::size_t step = 0; step < plan.size(); ++step) {
    auto it = by_name.find(plan[step]);
    if (it == by_name.end()) {
      v.reason = "step " + std::to_string(step + 1) + ": unknown operator '" + plan[step] + "'";
      return v;
    }
    const Operator& op = task.operators[it->second];
    auto next = apply_operator(s, op);
    if (!next) {
      v.reason = "step " + std::to_string(step + 1) + ": operator '" + op.name + "' is not applicable";
      return v;
    }
    s = std::move(*next);
    v.cost += op.cost;
  }
  if (!task.is_goal(s)) {
    v.reason = "final state does not satisfy the goal";
    v.cost = 0;
    return v;
  }
  v.valid = true;
  return v;
}

std::vector<std::string> plan_names(const SasTask& task, const std::vector<std::size_t>& plan) {
  std::vector<std::string> names;
  names.reserve(plan.size());
  for (std::size_t o : plan) names.push_back(task.operators[o].name);
  return names;
}

void write_plan(std::ostream& out, const std::vector<std::string>& plan, Cost cost, bool unit_cost) {
  for (const auto& name : plan) out << '(' << name << ")\n";
  out << "; cost = " << cost << (unit_cost ? " (unit cost)" : " (general cost)") << '\n';
}

std::vector<std::string> read_plan(std::istream& in) {
  std::vector<std::string> plan;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == ';') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (body.size() >= 2 && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
    plan.push_back(std::move(body));
  }
  return plan;
}

}  // namespace cpc
