#include "support.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

namespace cpc::testing {

namespace {

int draw(std::mt19937_64& gen, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

using Entry = std::pair<Cost, std::uint64_t>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

}  // namespace

SasTask random_task(std::mt19937_64& gen, const RandomTaskParams& p) {
  SasTask task;
  task.unit_cost = false;
  const int n = draw(gen, p.min_vars, p.max_vars);
  for (int v = 0; v < n; ++v) {
    Variable var;
    var.name = "var" + std::to_string(v);
    var.domain_size = draw(gen, p.min_domain, p.max_domain);
    for (int x = 0; x < var.domain_size; ++x) var.value_names.push_back("v" + std::to_string(v) + "=" + std::to_string(x));
    task.variables.push_back(std::move(var));
  }
  const int num_ops = draw(gen, p.min_ops, p.max_ops);
  for (int o = 0; o < num_ops; ++o) {
    Operator op;
    op.name = "op" + std::to_string(o);
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) vars[static_cast<std::size_t>(v)] = v;
    std::shuffle(vars.begin(), vars.end(), gen);
    const int num_eff = draw(gen, 1, std::min(n, 3));
    const int num_prevail = draw(gen, 0, std::min(n - num_eff, 2));
    std::map<int, Value> pre;
    std::map<int, Value> eff;
    for (int i = 0; i < num_eff; ++i) {
      const int v = vars[static_cast<std::size_t>(i)];
      const int dom = task.domain_size(v);
      const Value post = draw(gen, 0, dom - 1);
      eff[v] = post;
      if (draw(gen, 0, 1) == 1) {
        Value before = draw(gen, 0, dom - 2);
        if (before >= post) ++before;
        pre[v] = before;
      }
    }
    for (int i = 0; i < num_prevail; ++i) {
      const int v = vars[static_cast<std::size_t>(num_eff + i)];
      pre[v] = draw(gen, 0, task.domain_size(v) - 1);
    }
    for (auto [v, x] : pre) op.pre.push_back({v, x});
    for (auto [v, x] : eff) op.eff.push_back({v, x});
    op.cost = draw(gen, 0, 9) == 0 ? 0 : draw(gen, 1, p.max_cost);
    task.operators.push_back(std::move(op));
  }
  for (int v = 0; v < n; ++v) task.initial.push_back(draw(gen, 0, task.domain_size(v) - 1));
  std::vector<int> vars(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) vars[static_cast<std::size_t>(v)] = v;
  std::shuffle(vars.begin(), vars.end(), gen);
  const int num_goals = draw(gen, 1, std::min(n, 4));
  vars.resize(static_cast<std::size_t>(num_goals));
  std::sort(vars.begin(), vars.end());
  for (int v : vars) task.goal.push_back({v, draw(gen, 0, task.domain_size(v) - 1)});
  return task;
}

SasTask random_solvable_task(std::mt19937_64& gen, const RandomTaskParams& params) {
  while (true) {
    SasTask task = random_task(gen, params);
    if (task.is_goal(task.initial)) continue;
    if (optimal_cost(task)) return task;
  }
}

StateSpace::StateSpace(const SasTask& task) : task_(task) {
  for (std::size_t v = 0; v < task.num_variables(); ++v) {
    mult_.push_back(size_);
    size_ *= static_cast<std::uint64_t>(task.variables[v].domain_size);
  }

  // Explicit reverse graph.
  std::vector<std::vector<std::pair<std::uint64_t, Cost>>> reverse(size_);
  for (std::uint64_t i = 0; i < size_; ++i) {
    const State s = state(i);
    for (const Operator& op : task.operators) {
      bool ok = true;
      for (const Fact& f : op.pre) ok = ok && s[static_cast<std::size_t>(f.var)] == f.value;
      if (!ok) continue;
      State t = s;
      for (const Fact& f : op.eff) t[static_cast<std::size_t>(f.var)] = f.value;
      reverse[index(t)].push_back({i, op.cost});
    }
  }

  h_star_.assign(size_, std::nullopt);
  MinHeap heap;
  for (std::uint64_t i = 0; i < size_; ++i) {
    if (task.is_goal(state(i))) heap.push({0, i});
  }
  while (!heap.empty()) {
    const auto [d, i] = heap.top();
    heap.pop();
    if (h_star_[i]) continue;
    h_star_[i] = d;
    for (const auto& [pred, c] : reverse[i]) {
      if (!h_star_[pred]) heap.push({d + c, pred});
    }
  }

  reachable_.assign(size_, false);
  std::vector<std::uint64_t> stack{index(task.initial)};
  reachable_[stack.back()] = true;
  while (!stack.empty()) {
    const State s = state(stack.back());
    stack.pop_back();
    for (const Operator& op : task.operators) {
      bool ok = true;
      for (const Fact& f : op.pre) ok = ok && s[static_cast<std::size_t>(f.var)] == f.value;
      if (!ok) continue;
      State t = s;
      for (const Fact& f : op.eff) t[static_cast<std::size_t>(f.var)] = f.value;
      const auto j = index(t);
      if (!reachable_[j]) {
        reachable_[j] = true;
        stack.push_back(j);
      }
    }
  }
}

std::uint64_t StateSpace::index(const State& s) const {
  std::uint64_t r = 0;
  for (std::size_t v = 0; v < s.size(); ++v) r += static_cast<std::uint64_t>(s[v]) * mult_[v];
  return r;
}

State StateSpace::state(std::uint64_t index) const {
  State s(task_.num_variables());
  for (std::size_t v = 0; v < s.size(); ++v) {
    s[v] = static_cast<Value>(index / mult_[v] % static_cast<std::uint64_t>(task_.variables[v].domain_size));
  }
  return s;
}

std::size_t StateSpace::num_reachable() const {
  return static_cast<std::size_t>(std::count(reachable_.begin(), reachable_.end(), true));
}

std::optional<Cost> optimal_cost(const SasTask& task) {
  std::map<State, Cost> dist;
  std::priority_queue<std::pair<Cost, State>, std::vector<std::pair<Cost, State>>, std::greater<>> heap;
  heap.push({0, task.initial});
  while (!heap.empty()) {
    auto [d, s] = heap.top();
    heap.pop();
    if (dist.count(s)) continue;
    dist[s] = d;
    if (task.is_goal(s)) return d;
    for (const Operator& op : task.operators) {
      bool ok = true;
      for (const Fact& f : op.pre) ok = ok && s[static_cast<std::size_t>(f.var)] == f.value;
      if (!ok) continue;
      State t = s;
      for (const Fact& f : op.eff) t[static_cast<std::size_t>(f.var)] = f.value;
      if (!dist.count(t)) heap.push({d + op.cost, t});
    }
  }
  return std::nullopt;
}

std::vector<std::optional<Cost>> abstract_distances(const SasTask& task, const std::vector<int>& pattern,
                                                    const std::vector<Cost>& op_costs) {
  std::vector<std::uint64_t> mult;
  std::uint64_t size = 1;
  for (int v : pattern) {
    mult.push_back(size);
    size *= static_cast<std::uint64_t>(task.domain_size(v));
  }
  auto decode = [&](std::uint64_t r) {
    std::vector<Value> a(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      a[i] = static_cast<Value>(r / mult[i] % static_cast<std::uint64_t>(task.domain_size(pattern[i])));
    }
    return a;
  };
  auto position = [&](int var) -> int {
    auto it = std::find(pattern.begin(), pattern.end(), var);
    return it == pattern.end() ? -1 : static_cast<int>(it - pattern.begin());
  };

  std::vector<std::vector<std::pair<std::uint64_t, Cost>>> reverse(size);
  for (std::uint64_t r = 0; r < size; ++r) {
    const auto a = decode(r);
    for (std::size_t o = 0; o < task.operators.size(); ++o) {
      const Operator& op = task.operators[o];
      bool ok = true;
      for (const Fact& f : op.pre) {
        const int p = position(f.var);
        if (p >= 0 && a[static_cast<std::size_t>(p)] != f.value) ok = false;
      }
      if (!ok) continue;
      std::uint64_t t = r;
      for (const Fact& f : op.eff) {
        const int p = position(f.var);
        if (p < 0) continue;
        const auto pos = static_cast<std::size_t>(p);
        t = t - static_cast<std::uint64_t>(a[pos]) * mult[pos] + static_cast<std::uint64_t>(f.value) * mult[pos];
      }
      reverse[t].push_back({r, op_costs[o]});
    }
  }

  std::vector<std::optional<Cost>> dist(size);
  MinHeap heap;
  for (std::uint64_t r = 0; r < size; ++r) {
    const auto a = decode(r);
    bool goal = true;
    for (const Fact& g : task.goal) {
      const int p = position(g.var);
      if (p >= 0 && a[static_cast<std::size_t>(p)] != g.value) goal = false;
    }
    if (goal) heap.push({0, r});
  }
  while (!heap.empty()) {
    const auto [d, r] = heap.top();
    heap.pop();
    if (dist[r]) continue;
    dist[r] = d;
    for (const auto& [pred, c] : reverse[r]) {
      if (!dist[pred]) heap.push({d + c, pred});
    }
  }
  return dist;
}

SasTask toy_task() {
  SasTask task;
  task.variables = {{"A", 2, {"a0", "a1"}}, {"B", 2, {"b0", "b1"}}};
  task.operators = {{"o1", {{0, 0}}, {{0, 1}}, 2}, {"o2", {{1, 0}}, {{1, 1}}, 3}};
  task.initial = {0, 0};
  task.goal = {{0, 1}, {1, 1}};
  return task;
}

std::string to_sas_text(const SasTask& task) {
  std::ostringstream out;
  out << "begin_version\n3\nend_version\nbegin_metric\n" << (task.unit_cost ? 0 : 1) << "\nend_metric\n";
  out << task.num_variables() << '\n';
  for (const Variable& v : task.variables) {
    out << "begin_variable\n" << v.name << "\n-1\n" << v.domain_size << '\n';
    for (int x = 0; x < v.domain_size; ++x) {
      const std::string name = x < static_cast<int>(v.value_names.size()) ? v.value_names[static_cast<std::size_t>(x)]
                                                                           : "value" + std::to_string(x);
      out << "Atom " << name << '\n';
    }
    out << "end_variable\n";
  }
  out << "0\nbegin_state\n";
  for (Value x : task.initial) out << x << '\n';
  out << "end_state\nbegin_goal\n" << task.goal.size() << '\n';
  for (const Fact& g : task.goal) out << g.var << ' ' << g.value << '\n';
  out << "end_goal\n" << task.operators.size() << '\n';
  for (const Operator& op : task.operators) {
    out << "begin_operator\n" << op.name << '\n';
    std::vector<Fact> prevail;
    for (const Fact& f : op.pre) {
      const bool on_eff = std::any_of(op.eff.begin(), op.eff.end(), [&](const Fact& e) { return e.var == f.var; });
      if (!on_eff) prevail.push_back(f);
    }
    out << prevail.size() << '\n';
    for (const Fact& f : prevail) out << f.var << ' ' << f.value << '\n';
    out << op.eff.size() << '\n';
    for (const Fact& e : op.eff) {
      Value pre = -1;
      for (const Fact& f : op.pre) {
        if (f.var == e.var) pre = f.value;
      }
      out << "0 " << e.var << ' ' << pre << ' ' << e.value << '\n';
    }
    out << op.cost << "\nend_operator\n";
  }
  out << "0\n";
  return out.str();
}

std::string fixture_path(const std::string& name) { return std::string(CPC_FIXTURE_DIR) + "/" + name; }

}  // namespace cpc::testing
