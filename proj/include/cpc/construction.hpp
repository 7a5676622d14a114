#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpc/bandit.hpp"
#include "cpc/causal_graph.hpp"
#include "cpc/clock.hpp"
#include "cpc/collection.hpp"
#include "cpc/evaluator.hpp"
#include "cpc/gamer.hpp"
#include "cpc/random.hpp"

namespace cpc {

struct ConstructionConfig {
  double seed_phase_budget = 80.0;  // seconds per packer, resampling excluded
  double seed_size_start = 1e8;
  double seed_size_factor = 10.0;
  double construction_time = 1080.0;       // T
  double construction_memory = 4.0 * (1ull << 30);  // M, bytes
  int size_choice_min_exp = 9;              // CBP size limits 10^min .. 10^max
  int size_choice_max_exp = 35;
  double size_filter_factor = 1e4;          // drop choices above factor * S_l
  std::uint64_t seed = 1;
  PdbLimits pdb_limits{10'000'000, 30.0};
  GamerConfig gamer;
  SampleLimits sample_limits;
  /// Adaptive phase ends after this many consecutive attempts that produce
  /// no collection not already tried.
  std::size_t max_stall_attempts = 1000;
};

/// CBP size-limit arms: powers of ten from the configured range, those above
/// size_filter_factor * anchor removed; the smallest is kept if none survive.
std::vector<double> size_choices(const ConstructionConfig& config, double anchor);

struct AuditRecord {
  std::uint64_t attempt = 0;
  std::string phase;
  std::string algorithm;
  nlohmann::json parameters = nlohmann::json::object();
  double elapsed = 0.0;
  bool accepted = false;
  std::vector<Pattern> patterns;
  std::optional<Cost> init_h;  // candidate collection at the initial state
  std::optional<std::uint64_t> collection_seq;

  nlohmann::json to_json() const;
};

class AuditLog {
 public:
  void add(AuditRecord record);
  const std::vector<AuditRecord>& records() const { return records_; }
  void write_jsonl(std::ostream& out) const;

 private:
  std::vector<AuditRecord> records_;
};

struct PhaseTimes {
  double seed = 0.0;
  double adaptive = 0.0;
  double finalize = 0.0;
};

struct ConstructionStats {
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::map<std::string, std::size_t> accepted_by_provenance;
  std::size_t pruned = 0;
  std::size_t resumed_pdbs = 0;
  std::size_t completed_pdbs = 0;
  double peak_memory_bytes = 0.0;
  PhaseTimes phase_times;
  bool gamer_terminated = false;
};

/// The complete construction pipeline: NFD/NFI seeding, UCB1-driven
/// alternation between CBP and GAMER-Style, then partial-PDB completion and
/// a final dominance pruning pass.
class Construction {
 public:
  Construction(const SasTask& task, ConstructionConfig config, Clock& clock,
               const std::atomic<bool>* abort_flag = nullptr);

  /// Seeding with NFD then NFI. Returns S_l.
  double seed_phase();
  void adaptive_construct(double size_anchor);
  void finalize_collections();

  /// All three phases.
  const CollectionSet& run();

  const SasTask& task() const { return task_; }
  const CausalGraph& causal_graph() const { return graph_; }
  const ConstructionConfig& config() const { return config_; }
  const CollectionSet& collections() const { return set_; }
  CollectionSet& collections() { return set_; }
  const SampleSet& sample() const { return sample_; }
  const AuditLog& audit() const { return audit_; }
  const ConstructionStats& stats() const { return stats_; }
  double largest_seed_size() const { return s_l_; }
  const BanditState& algorithm_bandit() const { return algorithm_bandit_; }
  const BanditState& goal_count_bandit() const { return goal_count_bandit_; }
  const BanditState& size_bandit() const { return size_bandit_; }
  const GamerStyle& gamer() const { return gamer_; }

  double elapsed() const { return clock_.now() - start_; }
  double estimated_memory() const;

 private:
  bool out_of_time() const;
  bool out_of_memory();
  bool aborted() const { return abort_flag_ && abort_flag_->load(); }
  bool out_of_resources() { return out_of_time() || out_of_memory() || aborted(); }
  PdbLimits build_limits(double time_cap) const;
  /// Gates `candidate` through the evaluator and commits it when accepted.
  bool try_add(PdbCollection candidate, bool prune_after, AuditRecord& record);
  void ensure_sample();

  const SasTask& task_;
  ConstructionConfig config_;
  Clock& clock_;
  const std::atomic<bool>* abort_flag_;
  CausalGraph graph_;
  Rng rng_;
  double start_;

  CollectionSet set_;
  SampleSet sample_;
  bool sample_drawn_ = false;
  AuditLog audit_;
  ConstructionStats stats_;
  double s_l_;
  std::uint64_t next_seq_ = 0;
  std::set<std::vector<Pattern>> tried_;

  BanditState algorithm_bandit_;
  BanditState goal_count_bandit_;
  BanditState size_bandit_;
  std::vector<double> size_arms_;
  GamerStyle gamer_;
};

}  // namespace cpc
