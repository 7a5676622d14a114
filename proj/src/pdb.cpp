#include "cpc/pdb.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace cpc {

AbstractTask project_task(const SasTask& task, const Pattern& pattern, std::span<const Cost> op_costs) {
  AbstractTask abs;
  abs.pattern = pattern;
  std::vector<int> local(task.num_variables(), -1);
  for (std::size_t i = 0; i < pattern.length(); ++i) {
    const int v = pattern.vars()[i];
    local[static_cast<std::size_t>(v)] = static_cast<int>(i);
    abs.domains.push_back(task.domain_size(v));
    abs.initial.push_back(task.initial[static_cast<std::size_t>(v)]);
  }
  auto restrict = [&](const PartialState& ps) {
    PartialState out;
    for (const Fact& f : ps) {
      const int l = local[static_cast<std::size_t>(f.var)];
      if (l >= 0) out.push_back({l, f.value});
    }
    // Pattern order matches ascending variable order, so `out` stays sorted.
    return out;
  };
  abs.goal = restrict(task.goal);

  std::map<std::pair<PartialState, PartialState>, Cost> merged;
  for (std::size_t o = 0; o < task.operators.size(); ++o) {
    PartialState eff = restrict(task.operators[o].eff);
    if (eff.empty()) continue;
    PartialState pre = restrict(task.operators[o].pre);
    auto key = std::make_pair(std::move(pre), std::move(eff));
    auto [it, inserted] = merged.emplace(std::move(key), op_costs[o]);
    if (!inserted) it->second = std::min(it->second, op_costs[o]);
  }
  abs.operators.reserve(merged.size());
  for (auto& [key, cost] : merged) abs.operators.push_back({key.first, key.second, cost});
  return abs;
}

std::vector<Cost> original_costs(const SasTask& task) {
  std::vector<Cost> costs;
  costs.reserve(task.operators.size());
  for (const Operator& op : task.operators) costs.push_back(op.cost);
  return costs;
}

std::vector<std::vector<Cost>> apply_zero_one_partition(const SasTask& task, std::span<const Pattern> patterns) {
  std::vector<std::vector<Cost>> costs(patterns.size(), std::vector<Cost>(task.operators.size(), 0));
  for (std::size_t o = 0; o < task.operators.size(); ++o) {
    const Operator& op = task.operators[o];
    for (std::size_t p = 0; p < patterns.size(); ++p) {
      const bool affects = std::any_of(op.eff.begin(), op.eff.end(),
                                       [&](const Fact& f) { return patterns[p].contains(f.var); });
      if (affects) {
        costs[p][o] = op.cost;
        break;
      }
    }
  }
  return costs;
}

namespace detail {

// Inverted abstract operator with every effect variable's prior value fixed:
// applicable to rank r iff all checks hold; predecessor rank is r + delta.
struct RegressionOp {
  struct Check {
    std::uint64_t multiplier;
    std::uint64_t domain;
    std::uint64_t value;
  };
  std::vector<Check> checks;
  std::int64_t delta = 0;
  std::uint32_t cost = 0;
};

struct AbstractSpace {
  std::vector<RegressionOp> ops;
  PartialState goal;
  Cost increment = 0;
};

struct Frontier {
  using Entry = std::pair<std::uint32_t, std::uint64_t>;
  std::vector<Entry> heap;  // min-heap on cost
  std::unordered_map<std::uint64_t, std::uint32_t> tentative;
  bool overflow = false;
};

}  // namespace detail

namespace {

using detail::AbstractSpace;
using detail::Frontier;
using detail::RegressionOp;

std::shared_ptr<const AbstractSpace> make_space(const AbstractTask& abs, const PatternIndexer& indexer) {
  auto space = std::make_shared<AbstractSpace>();
  space->goal = abs.goal;
  const auto mult = indexer.multipliers();
  Cost min_positive = 0;
  for (const AbstractOperator& op : abs.operators) {
    if (op.cost > 0 && (min_positive == 0 || op.cost < min_positive)) min_positive = op.cost;

    std::vector<RegressionOp::Check> base_checks;
    std::int64_t base_delta = 0;
    std::vector<int> free_positions;  // effects without a precondition
    for (const Fact& e : op.eff) {
      const auto pos = static_cast<std::size_t>(e.var);
      base_checks.push_back({mult[pos], static_cast<std::uint64_t>(abs.domains[pos]), static_cast<std::uint64_t>(e.value)});
      auto pre = std::find_if(op.pre.begin(), op.pre.end(), [&](const Fact& p) { return p.var == e.var; });
      if (pre == op.pre.end()) {
        free_positions.push_back(e.var);
      } else {
        base_delta += (static_cast<std::int64_t>(pre->value) - e.value) * static_cast<std::int64_t>(mult[pos]);
      }
    }
    for (const Fact& p : op.pre) {
      const bool in_eff = std::any_of(op.eff.begin(), op.eff.end(), [&](const Fact& e) { return e.var == p.var; });
      if (!in_eff) {
        const auto pos = static_cast<std::size_t>(p.var);
        base_checks.push_back({mult[pos], static_cast<std::uint64_t>(abs.domains[pos]), static_cast<std::uint64_t>(p.value)});
      }
    }
    const auto cost = static_cast<std::uint32_t>(std::min<Cost>(op.cost, Pdb::kMaxStoredCost));

    // Enumerate prior values of the free effect variables.
    std::vector<Value> assignment(free_positions.size(), 0);
    while (true) {
      std::int64_t delta = base_delta;
      for (std::size_t i = 0; i < free_positions.size(); ++i) {
        const auto pos = static_cast<std::size_t>(free_positions[i]);
        const Value eff_value =
            std::find_if(op.eff.begin(), op.eff.end(), [&](const Fact& e) { return e.var == free_positions[i]; })->value;
        delta += (static_cast<std::int64_t>(assignment[i]) - eff_value) * static_cast<std::int64_t>(mult[pos]);
      }
      if (delta != 0) space->ops.push_back({base_checks, delta, cost});
      std::size_t i = 0;
      for (; i < free_positions.size(); ++i) {
        if (++assignment[i] < abs.domains[static_cast<std::size_t>(free_positions[i])]) break;
        assignment[i] = 0;
      }
      if (i == free_positions.size()) break;
    }
  }
  space->increment = min_positive;
  return space;
}

}  // namespace

class RegressionSearch {
 public:
  static std::optional<Pdb> start(const SasTask& task, const Pattern& pattern, std::span<const Cost> op_costs,
                                  const PdbLimits& limits, Clock& clock) {
    auto indexer = PatternIndexer::create(task, pattern);
    if (!indexer) return std::nullopt;

    // Goal states: every completion of the projected goal.
    const AbstractTask abs = project_task(task, pattern, op_costs);
    std::uint64_t num_goal_states = indexer->size();
    for (const Fact& g : abs.goal) num_goal_states /= static_cast<std::uint64_t>(abs.domains[static_cast<std::size_t>(g.var)]);
    if (num_goal_states > limits.max_entries) return std::nullopt;

    Pdb pdb;
    pdb.pattern_ = pattern;
    pdb.indexer_ = *indexer;
    pdb.op_costs_.assign(op_costs.begin(), op_costs.end());
    pdb.space_ = make_space(abs, pdb.indexer_);
    pdb.dense_ = indexer->size() <= limits.max_entries;
    if (pdb.dense_) pdb.table_.assign(indexer->size(), Pdb::kUnvisited);

    Frontier frontier;
    std::vector<char> fixed(pattern.length(), 0);
    std::vector<Value> abstract(pattern.length(), 0);
    for (const Fact& g : abs.goal) {
      fixed[static_cast<std::size_t>(g.var)] = 1;
      abstract[static_cast<std::size_t>(g.var)] = g.value;
    }
    while (true) {
      const std::uint64_t r = pdb.indexer_.rank_abstract(abstract);
      frontier.tentative.emplace(r, 0);
      frontier.heap.emplace_back(0, r);
      std::size_t i = 0;
      for (; i < abstract.size(); ++i) {
        if (fixed[i]) continue;
        if (++abstract[i] < abs.domains[i]) break;
        abstract[i] = 0;
      }
      if (i == abstract.size()) break;
    }
    clock.charge(num_goal_states);
    std::make_heap(frontier.heap.begin(), frontier.heap.end(), std::greater<>());

    run(pdb, frontier, limits, clock);
    return pdb;
  }

  static Pdb resume(const Pdb& old, const PdbLimits& limits, Clock& clock) {
    if (!old.can_resume()) return old;
    Pdb pdb = old;
    Frontier frontier = *old.frontier_;
    pdb.frontier_.reset();
    run(pdb, frontier, limits, clock);
    return pdb;
  }

 private:
  static bool is_settled(const Pdb& pdb, std::uint64_t r) {
    if (pdb.dense_) return pdb.table_[r] != Pdb::kUnvisited;
    return pdb.sparse_.count(r) != 0;
  }

  static void settle(Pdb& pdb, std::uint64_t r, std::uint32_t cost) {
    if (pdb.dense_) {
      pdb.table_[r] = cost;
    } else {
      pdb.sparse_.emplace(r, cost);
    }
    ++pdb.settled_;
  }

  static void run(Pdb& pdb, Frontier& f, const PdbLimits& limits, Clock& clock) {
    const auto& ops = pdb.space_->ops;
    const double start = clock.now();
    auto greater = std::greater<>();
    while (!f.heap.empty()) {
      if (clock.now() - start >= limits.time_budget) break;
      if (!pdb.dense_ && pdb.settled_ + f.tentative.size() >= limits.max_entries) break;

      std::pop_heap(f.heap.begin(), f.heap.end(), greater);
      const auto [cost, r] = f.heap.back();
      f.heap.pop_back();
      if (is_settled(pdb, r)) continue;
      settle(pdb, r, cost);
      f.tentative.erase(r);

      std::uint64_t work = 1;
      for (const RegressionOp& op : ops) {
        bool applicable = true;
        for (const auto& c : op.checks) {
          if ((r / c.multiplier) % c.domain != c.value) {
            applicable = false;
            break;
          }
        }
        if (!applicable) continue;
        ++work;
        const auto pred = static_cast<std::uint64_t>(static_cast<std::int64_t>(r) + op.delta);
        if (is_settled(pdb, pred)) continue;
        const std::uint64_t next = std::uint64_t{cost} + op.cost;
        if (next > Pdb::kMaxStoredCost) {
          f.overflow = true;
          continue;
        }
        auto it = f.tentative.find(pred);
        if (it == f.tentative.end() || next < it->second) {
          f.tentative[pred] = static_cast<std::uint32_t>(next);
          f.heap.emplace_back(static_cast<std::uint32_t>(next), pred);
          std::push_heap(f.heap.begin(), f.heap.end(), greater);
        }
      }
      clock.charge(work);
    }
    finish(pdb, std::move(f));
  }

  static void finish(Pdb& pdb, Frontier&& f) {
    auto greater = std::greater<>();
    while (!f.heap.empty() && is_settled(pdb, f.heap.front().second)) {
      std::pop_heap(f.heap.begin(), f.heap.end(), greater);
      f.heap.pop_back();
    }
    if (f.heap.empty() && !f.overflow) {
      pdb.partial_ = false;
      pdb.depth_ = 0;
      pdb.increment_ = 0;
      pdb.fallback_ = 0;
      pdb.frontier_.reset();
      if (pdb.dense_) std::replace(pdb.table_.begin(), pdb.table_.end(), Pdb::kUnvisited, Pdb::kUnreachable);
      return;
    }
    // Every unsettled state costs at least the cheapest open entry.
    const Cost lower_bound = f.heap.empty() ? Cost{Pdb::kMaxStoredCost} + 1 : Cost{f.heap.front().first};
    const Cost inc = pdb.space_->increment;
    pdb.partial_ = true;
    pdb.increment_ = inc;
    pdb.depth_ = lower_bound >= inc ? lower_bound - inc : 0;
    pdb.fallback_ = std::min(pdb.depth_ + inc, lower_bound);
    pdb.frontier_ = std::make_shared<const Frontier>(std::move(f));
  }
};

std::optional<Pdb> build_pdb(const SasTask& task, const Pattern& pattern, std::span<const Cost> op_costs,
                             const PdbLimits& limits, Clock& clock) {
  return RegressionSearch::start(task, pattern, op_costs, limits, clock);
}

Pdb resume_pdb(const Pdb& pdb, const PdbLimits& limits, Clock& clock) {
  return RegressionSearch::resume(pdb, limits, clock);
}

Cost Pdb::lookup_rank(std::uint64_t rank) const {
  std::uint32_t v = kUnvisited;
  if (dense_) {
    v = table_[rank];
  } else if (auto it = sparse_.find(rank); it != sparse_.end()) {
    v = it->second;
  }
  if (v == kUnreachable) return kInfiniteCost;
  if (v == kUnvisited) return partial_ ? fallback_ : kInfiniteCost;
  return v;
}

std::optional<Cost> Pdb::stored_value(std::uint64_t rank) const {
  std::uint32_t v = kUnvisited;
  if (dense_) {
    v = table_[rank];
  } else if (auto it = sparse_.find(rank); it != sparse_.end()) {
    v = it->second;
  }
  if (v == kUnvisited || v == kUnreachable) return std::nullopt;
  return v;
}

std::size_t Pdb::memory_bytes() const {
  std::size_t bytes = table_.size() * sizeof(std::uint32_t) + sparse_.size() * 32 + op_costs_.size() * sizeof(Cost);
  if (frontier_) bytes += frontier_->heap.size() * sizeof(detail::Frontier::Entry) + frontier_->tentative.size() * 32;
  return bytes;
}

namespace {

constexpr char kMagic[8] = {'C', 'P', 'C', 'P', 'D', 'B', '0', '1'};

template <typename T>
void write_raw(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("truncated PDB file");
  return v;
}

}  // namespace

void Pdb::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(pattern_.length()));
  for (int v : pattern_.vars()) write_raw<std::int32_t>(out, v);
  for (int d : indexer_.domains()) write_raw<std::int32_t>(out, d);
  write_raw<std::uint8_t>(out, partial_ ? 1 : 0);
  write_raw<std::int64_t>(out, depth_);
  write_raw<std::int64_t>(out, increment_);
  write_raw<std::int64_t>(out, fallback_);
  write_raw<std::uint32_t>(out, sizeof(std::uint32_t));  // entry width
  write_raw<std::uint8_t>(out, dense_ ? 1 : 0);
  if (dense_) {
    write_raw<std::uint64_t>(out, table_.size());
    out.write(reinterpret_cast<const char*>(table_.data()),
              static_cast<std::streamsize>(table_.size() * sizeof(std::uint32_t)));
  } else {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> entries(sparse_.begin(), sparse_.end());
    std::sort(entries.begin(), entries.end());
    write_raw<std::uint64_t>(out, entries.size());
    for (const auto& [r, c] : entries) {
      write_raw(out, r);
      write_raw(out, c);
    }
  }
}

Pdb Pdb::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a PDB file");
  }
  const auto len = read_raw<std::uint32_t>(in);
  std::vector<int> vars(len), domains(len);
  for (auto& v : vars) v = read_raw<std::int32_t>(in);
  for (auto& d : domains) d = read_raw<std::int32_t>(in);
  Pdb pdb;
  pdb.pattern_ = Pattern(vars);
  if (pdb.pattern_.vars() != vars) throw std::runtime_error("PDB file pattern is not strictly increasing");
  auto indexer = PatternIndexer::create(domains);
  if (!indexer) throw std::runtime_error("PDB file abstract space too large");
  pdb.indexer_ = *indexer;
  pdb.partial_ = read_raw<std::uint8_t>(in) != 0;
  pdb.depth_ = read_raw<std::int64_t>(in);
  pdb.increment_ = read_raw<std::int64_t>(in);
  pdb.fallback_ = read_raw<std::int64_t>(in);
  if (read_raw<std::uint32_t>(in) != sizeof(std::uint32_t)) throw std::runtime_error("unsupported PDB entry width");
  pdb.dense_ = read_raw<std::uint8_t>(in) != 0;
  const auto count = read_raw<std::uint64_t>(in);
  if (pdb.dense_) {
    if (count != pdb.indexer_.size()) throw std::runtime_error("PDB table size mismatch");
    pdb.table_.resize(count);
    if (!in.read(reinterpret_cast<char*>(pdb.table_.data()), static_cast<std::streamsize>(count * sizeof(std::uint32_t)))) {
      throw std::runtime_error("truncated PDB file");
    }
    pdb.settled_ = static_cast<std::uint64_t>(std::count_if(pdb.table_.begin(), pdb.table_.end(), [](std::uint32_t v) {
      return v != kUnvisited && v != kUnreachable;
    }));
  } else {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto r = read_raw<std::uint64_t>(in);
      pdb.sparse_.emplace(r, read_raw<std::uint32_t>(in));
    }
    pdb.settled_ = count;
  }
  return pdb;
}

}  // namespace cpc
