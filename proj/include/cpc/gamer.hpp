#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cpc/causal_graph.hpp"
#include "cpc/clock.hpp"
#include "cpc/evaluator.hpp"
#include "cpc/pdb.hpp"
#include "cpc/random.hpp"

namespace cpc {

struct GamerConfig {
  double iteration_cap = 120.0;  // seconds per call
  PdbLimits candidate_limits{10'000'000, 10.0};
  SampleLimits sample_limits;
};

enum class GamerOutcome { kNewPattern, kNoChange, kTerminated };

struct GamerStepResult {
  GamerOutcome outcome = GamerOutcome::kNoChange;
  Pattern pattern;
  std::shared_ptr<const Pdb> pdb;
  std::size_t candidates_evaluated = 0;
};

/// Candidate value given to dead-end sample states when averaging.
inline constexpr double kDeadEndScore = 1e9;

/// Indices of the values within 0.1% of the best one, or nothing when the
/// best does not exceed `threshold`.
std::vector<std::size_t> select_within_margin(const std::vector<double>& values, double threshold);

/// Hill climbing over a single pattern that starts from the goal variables
/// and grows by causally related variables that raise the mean heuristic
/// over a dedicated random-walk sample.
///
/// The first call builds the goal-variable PDB and returns it. Each later
/// call regenerates the candidate list when it is empty (shuffling the
/// leftovers of an interrupted call otherwise), evaluates P_sel + {v} for
/// candidates popped from the back, and grows P_sel by every candidate
/// within 0.1% of the best value if that value beats P_sel's own.
class GamerStyle {
 public:
  using Scorer = std::function<double(const Pdb&)>;
  using ResourceCheck = std::function<bool()>;

  GamerStyle(const SasTask& task, const CausalGraph& graph, GamerConfig config);

  /// `out_of_resources` is polled before each candidate build.
  GamerStepResult step(Rng& rng, Clock& clock, const ResourceCheck& out_of_resources);

  bool started() const { return started_; }
  bool terminated() const { return terminated_; }
  const Pattern& selected() const { return selected_; }
  const std::shared_ptr<const Pdb>& selected_pdb() const { return selected_pdb_; }
  const std::vector<int>& candidates() const { return candidates_; }
  const SampleSet& sample() const { return sample_; }
  Cost last_init_h() const { return last_init_h_; }
  int resamples() const { return resamples_; }
  std::size_t memory_bytes() const;

  /// Mean heuristic of `pdb` over the GAMER sample.
  double evaluate(const Pdb& pdb) const;

  /// Replaces the default mean-h evaluator.
  void set_scorer(Scorer scorer) { scorer_ = std::move(scorer); }

 private:
  double score(const Pdb& pdb) const { return scorer_ ? scorer_(pdb) : evaluate(pdb); }
  void redraw_sample(Rng& rng, Clock& clock);

  const SasTask& task_;
  const CausalGraph& graph_;
  GamerConfig config_;
  Scorer scorer_;

  bool started_ = false;
  bool terminated_ = false;
  Pattern selected_;
  std::shared_ptr<const Pdb> selected_pdb_;
  std::vector<int> candidates_;
  SampleSet sample_;
  Cost last_init_h_ = 0;
  int resamples_ = 0;
};

}  // namespace cpc
