#include "cpc/packing.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpc {

namespace {

void erase_value(std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it != v.end()) v.erase(it);
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

std::vector<Pattern> next_fit_pack(const SasTask& task, const CausalGraph& graph, PackingOrder order,
                                   double size_limit, Rng& rng) {
  std::vector<int> candidates;
  for (int v = 0; v < static_cast<int>(task.num_variables()); ++v) {
    if (static_cast<double>(task.domain_size(v)) < size_limit) candidates.push_back(v);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return order == PackingOrder::kDecreasing ? task.domain_size(a) > task.domain_size(b)
                                              : task.domain_size(a) < task.domain_size(b);
  });

  std::vector<Pattern> bins;
  std::vector<int> bin;
  double bin_size = 1.0;
  while (!candidates.empty()) {
    const int v = candidates.front();
    candidates.erase(candidates.begin());
    if (!has_space(bin_size, task.domain_size(v), size_limit)) {
      bins.emplace_back(bin);
      bin.clear();
      bin_size = 1.0;
    }
    bin.push_back(v);
    bin_size *= task.domain_size(v);

    std::vector<int> related;
    for (int u : candidates) {
      if (graph.are_related(u, v)) related.push_back(u);
    }
    rng.shuffle(related);
    for (int u : related) {
      if (has_space(bin_size, task.domain_size(u), size_limit)) {
        bin.push_back(u);
        bin_size *= task.domain_size(u);
        erase_value(candidates, u);
      }
    }
  }
  if (!bin.empty()) bins.emplace_back(bin);
  return bins;
}

std::vector<Pattern> cbp_pack(const SasTask& task, const CausalGraph& graph, int goals_per_bin, double size_limit,
                              Rng& rng) {
  if (goals_per_bin < 1) throw std::invalid_argument("cbp_pack: goals_per_bin must be at least 1");
  std::vector<int> candidates;
  for (int v = 0; v < static_cast<int>(task.num_variables()); ++v) {
    if (static_cast<double>(task.domain_size(v)) < size_limit) candidates.push_back(v);
  }
  std::vector<int> goal_candidates;
  for (int v : task.goal_variables()) {
    if (static_cast<double>(task.domain_size(v)) < size_limit) goal_candidates.push_back(v);
  }

  std::vector<Pattern> bins;
  while (!goal_candidates.empty()) {
    std::vector<int> drawn = goal_candidates;
    rng.shuffle(drawn);
    drawn.resize(std::min<std::size_t>(drawn.size(), static_cast<std::size_t>(goals_per_bin)));

    std::vector<int> bin;
    double bin_size = 1.0;
    for (int g : drawn) {
      if (!has_space(bin_size, task.domain_size(g), size_limit)) continue;
      bin.push_back(g);
      bin_size *= task.domain_size(g);
      erase_value(candidates, g);
      erase_value(goal_candidates, g);
    }

    std::vector<int> related;
    for (int u : candidates) {
      if (std::any_of(bin.begin(), bin.end(), [&](int g) { return graph.are_related(u, g); })) related.push_back(u);
    }
    rng.shuffle(related);
    while (true) {
      auto fit = std::find_if(related.begin(), related.end(),
                              [&](int u) { return has_space(bin_size, task.domain_size(u), size_limit); });
      if (fit == related.end()) break;
      const int v = *fit;
      related.erase(fit);
      bin.push_back(v);
      bin_size *= task.domain_size(v);
      erase_value(candidates, v);
      erase_value(goal_candidates, v);
      for (int u : candidates) {
        if (graph.are_related(u, v) && !contains(related, u)) related.push_back(u);
      }
      rng.shuffle(related);
    }
    bins.emplace_back(bin);
  }
  std::stable_sort(bins.begin(), bins.end(), [](const Pattern& a, const Pattern& b) { return a.length() > b.length(); });
  return bins;
}

}  // namespace cpc
