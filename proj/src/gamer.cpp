#include "cpc/gamer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cpc {

std::vector<std::size_t> select_within_margin(const std::vector<double>& values, double threshold) {
  std::vector<std::size_t> out;
  if (values.empty()) return out;
  const double best = *std::max_element(values.begin(), values.end());
  if (!(best > threshold)) return out;
  const double floor = best - 0.001 * std::abs(best);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= floor) out.push_back(i);
  }
  return out;
}

GamerStyle::GamerStyle(const SasTask& task, const CausalGraph& graph, GamerConfig config)
    : task_(task), graph_(graph), config_(std::move(config)) {}

double GamerStyle::evaluate(const Pdb& pdb) const {
  if (sample_.states.empty()) return 0.0;
  double sum = 0.0;
  for (const State& s : sample_.states) {
    const Cost h = pdb.lookup(s);
    sum += h == kInfiniteCost ? kDeadEndScore : static_cast<double>(h);
  }
  return sum / static_cast<double>(sample_.states.size());
}

std::size_t GamerStyle::memory_bytes() const {
  std::size_t bytes = selected_pdb_ ? selected_pdb_->memory_bytes() : 0;
  bytes += sample_.states.size() * (task_.num_variables() * sizeof(Value) + sizeof(Cost));
  return bytes;
}

void GamerStyle::redraw_sample(Rng& rng, Clock& clock) {
  const auto& pdb = *selected_pdb_;
  sample_ = draw_sample(
      task_, [&pdb](const State& s) { return pdb.lookup(s); }, rng, config_.sample_limits, clock);
  ++resamples_;
}

GamerStepResult GamerStyle::step(Rng& rng, Clock& clock, const ResourceCheck& out_of_resources) {
  GamerStepResult result;
  if (terminated_) {
    result.outcome = GamerOutcome::kTerminated;
    return result;
  }
  const auto costs = original_costs(task_);

  if (!started_) {
    started_ = true;
    selected_ = Pattern(task_.goal_variables());
    auto pdb = build_pdb(task_, selected_, costs, config_.candidate_limits, clock);
    if (!pdb) {
      terminated_ = true;
      result.outcome = GamerOutcome::kTerminated;
      return result;
    }
    selected_pdb_ = std::make_shared<const Pdb>(std::move(*pdb));
    last_init_h_ = selected_pdb_->lookup(task_.initial);
    redraw_sample(rng, clock);
    result.outcome = GamerOutcome::kNewPattern;
    result.pattern = selected_;
    result.pdb = selected_pdb_;
    return result;
  }

  if (candidates_.empty()) {
    candidates_ = causally_related_vars(graph_, selected_.vars());
  } else {
    rng.shuffle(candidates_);
  }
  const double threshold = score(*selected_pdb_);

  struct Candidate {
    int var;
    double value;
    std::shared_ptr<const Pdb> pdb;
  };
  std::vector<Candidate> evaluated;
  const double start = clock.now();
  while (!candidates_.empty() && clock.now() - start < config_.iteration_cap && !out_of_resources()) {
    const int v = candidates_.back();
    candidates_.pop_back();
    std::vector<int> vars = selected_.vars();
    vars.push_back(v);
    auto pdb = build_pdb(task_, Pattern(std::move(vars)), costs, config_.candidate_limits, clock);
    if (!pdb) {
      evaluated.push_back({v, -std::numeric_limits<double>::infinity(), nullptr});
      continue;
    }
    auto shared = std::make_shared<const Pdb>(std::move(*pdb));
    const double value = score(*shared);
    evaluated.push_back({v, value, std::move(shared)});
  }
  result.candidates_evaluated = evaluated.size();

  std::vector<double> values;
  values.reserve(evaluated.size());
  for (const auto& c : evaluated) values.push_back(c.value);
  const auto chosen = select_within_margin(values, threshold);

  if (chosen.empty()) {
    if (candidates_.empty()) {
      terminated_ = true;
      result.outcome = GamerOutcome::kTerminated;
    } else {
      result.outcome = GamerOutcome::kNoChange;
    }
    return result;
  }

  std::vector<int> vars = selected_.vars();
  for (std::size_t i : chosen) vars.push_back(evaluated[i].var);
  Pattern grown(std::move(vars));
  std::shared_ptr<const Pdb> grown_pdb;
  if (chosen.size() == 1) {
    grown_pdb = evaluated[chosen.front()].pdb;
  } else if (auto pdb = build_pdb(task_, grown, costs, config_.candidate_limits, clock)) {
    grown_pdb = std::make_shared<const Pdb>(std::move(*pdb));
  } else {
    // The union is too large to index; fall back to the best single candidate.
    const auto best = *std::max_element(chosen.begin(), chosen.end(),
                                        [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<int> one = selected_.vars();
    one.push_back(evaluated[best].var);
    grown = Pattern(std::move(one));
    grown_pdb = evaluated[best].pdb;
  }

  const Cost previous_h = selected_pdb_->lookup(task_.initial);
  selected_ = std::move(grown);
  selected_pdb_ = std::move(grown_pdb);
  const Cost new_h = selected_pdb_->lookup(task_.initial);
  if (rose_over_ten_percent(previous_h, new_h)) redraw_sample(rng, clock);
  last_init_h_ = new_h;
  candidates_.clear();

  result.outcome = GamerOutcome::kNewPattern;
  result.pattern = selected_;
  result.pdb = selected_pdb_;
  return result;
}

}  // namespace cpc
