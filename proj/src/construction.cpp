#include "cpc/construction.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "cpc/packing.hpp"

namespace cpc {

std::vector<double> size_choices(const ConstructionConfig& config, double anchor) {
  std::vector<double> all;
  for (int e = config.size_choice_min_exp; e <= config.size_choice_max_exp; ++e) all.push_back(std::pow(10.0, e));
  std::vector<double> kept;
  const double cap = config.size_filter_factor * anchor;
  for (double s : all) {
    if (s <= cap) kept.push_back(s);
  }
  if (kept.empty() && !all.empty()) kept.push_back(all.front());
  return kept;
}

namespace {

nlohmann::json cost_json(Cost c) {
  if (c == kInfiniteCost) return "infinity";
  return c;
}

}  // namespace

nlohmann::json AuditRecord::to_json() const {
  nlohmann::json j;
  j["attempt"] = attempt;
  j["phase"] = phase;
  j["algorithm"] = algorithm;
  j["parameters"] = parameters;
  j["elapsed"] = elapsed;
  j["accepted"] = accepted;
  auto& pats = j["patterns"] = nlohmann::json::array();
  for (const Pattern& p : patterns) pats.push_back(p.vars());
  j["init_h"] = init_h ? cost_json(*init_h) : nullptr;
  j["collection_seq"] = collection_seq ? nlohmann::json(*collection_seq) : nlohmann::json(nullptr);
  return j;
}

void AuditLog::add(AuditRecord record) {
  record.attempt = records_.size();
  records_.push_back(std::move(record));
}

void AuditLog::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) out << r.to_json().dump() << '\n';
}

Construction::Construction(const SasTask& task, ConstructionConfig config, Clock& clock,
                           const std::atomic<bool>* abort_flag)
    : task_(task),
      config_(std::move(config)),
      clock_(clock),
      abort_flag_(abort_flag),
      graph_(task),
      rng_(config_.seed),
      start_(clock.now()),
      s_l_(config_.seed_size_start),
      gamer_(task_, graph_, config_.gamer) {}

double Construction::estimated_memory() const {
  double bytes = static_cast<double>(set_.memory_bytes());
  bytes += static_cast<double>(sample_.size() * (task_.num_variables() * sizeof(Value) + sizeof(Cost)));
  bytes += static_cast<double>(gamer_.memory_bytes());
  return bytes;
}

bool Construction::out_of_time() const { return elapsed() >= config_.construction_time; }

bool Construction::out_of_memory() {
  const double m = estimated_memory();
  stats_.peak_memory_bytes = std::max(stats_.peak_memory_bytes, m);
  return m >= config_.construction_memory;
}

PdbLimits Construction::build_limits(double time_cap) const {
  PdbLimits limits = config_.pdb_limits;
  limits.time_budget = std::max(0.0, std::min(limits.time_budget, time_cap));
  return limits;
}

void Construction::ensure_sample() {
  if (sample_drawn_) return;
  const double t = clock_.now();
  sample_ = draw_sample(task_, set_, rng_, config_.sample_limits, clock_);
  sample_.resample_time_spent = clock_.now() - t;
  sample_drawn_ = true;
}

bool Construction::try_add(PdbCollection candidate, bool prune_after, AuditRecord& record) {
  record.patterns = candidate.patterns();
  if (candidate.pdbs.empty()) return false;
  record.init_h = collection_heuristic(candidate, task_.initial);
  if (!should_add(sample_, candidate)) return false;

  candidate.creation_seq = next_seq_++;
  record.collection_seq = candidate.creation_seq;
  ++stats_.accepted;
  ++stats_.accepted_by_provenance[to_string(candidate.provenance)];
  const CommitResult commit = commit_addition(task_, sample_, set_, std::move(candidate));
  maybe_resample(task_, sample_, commit.resample_trigger, set_, rng_, config_.sample_limits, clock_);
  if (prune_after) {
    const std::size_t before = set_.size();
    prune_dominated(set_, sample_);
    stats_.pruned += before - set_.size();
  }
  out_of_memory();  // refresh the peak estimate
  return true;
}

double Construction::seed_phase() {
  const double phase_start = clock_.now();
  double total_size = 1.0;
  for (std::size_t v = 0; v < task_.num_variables(); ++v) total_size *= task_.domain_size(static_cast<int>(v));

  bool any_added = false;
  double largest_added = config_.seed_size_start;
  for (PackingOrder order : {PackingOrder::kDecreasing, PackingOrder::kIncreasing}) {
    const Provenance provenance = order == PackingOrder::kDecreasing ? Provenance::kNfd : Provenance::kNfi;
    const double packer_start = clock_.now();
    const double resample_start = sample_.resample_time_spent;
    auto used = [&] { return (clock_.now() - packer_start) - (sample_.resample_time_spent - resample_start); };

    for (double limit = config_.seed_size_start;; limit *= config_.seed_size_factor) {
      if (used() >= config_.seed_phase_budget || out_of_resources()) break;
      ensure_sample();
      const double t0 = clock_.now();
      const auto patterns = next_fit_pack(task_, graph_, order, limit, rng_);
      AuditRecord record;
      record.phase = "seed";
      record.algorithm = to_string(provenance);
      record.parameters["size_limit"] = limit;
      bool accepted = false;
      if (!patterns.empty()) {
        tried_.insert(patterns);
        auto candidate = build_collection(task_, patterns, provenance,
                                          build_limits(config_.seed_phase_budget - used()), clock_);
        accepted = try_add(std::move(candidate), /*prune_after=*/true, record);
      }
      ++stats_.attempts;
      record.accepted = accepted;
      record.elapsed = clock_.now() - t0;
      audit_.add(std::move(record));
      if (accepted) {
        largest_added = any_added ? std::max(largest_added, limit) : limit;
        any_added = true;
      }
      // Once every variable fits, larger limits pack identically.
      if (limit > total_size) break;
    }
  }
  s_l_ = largest_added;
  stats_.phase_times.seed += clock_.now() - phase_start;
  return s_l_;
}

void Construction::adaptive_construct(double size_anchor) {
  const double phase_start = clock_.now();
  algorithm_bandit_ = BanditState::with_labels({"CBP", "GAMER"});
  std::vector<std::string> n_labels;
  const int num_goals = static_cast<int>(task_.goal.size());
  for (int n = 1; n <= num_goals; ++n) n_labels.push_back(std::to_string(n));
  goal_count_bandit_ = BanditState::with_labels(std::move(n_labels));
  size_arms_ = size_choices(config_, size_anchor);
  std::vector<std::string> s_labels;
  for (double s : size_arms_) s_labels.push_back("1e" + std::to_string(static_cast<int>(std::lround(std::log10(s)))));
  size_bandit_ = BanditState::with_labels(std::move(s_labels));

  std::size_t stall = 0;
  while (!out_of_resources() && stall < config_.max_stall_attempts && !algorithm_bandit_.arms.empty()) {
    ensure_sample();
    const std::size_t arm = ucb1_select(algorithm_bandit_);
    const std::string algorithm = algorithm_bandit_.arms[arm].label;
    const double t0 = clock_.now();
    AuditRecord record;
    record.phase = "adaptive";
    record.algorithm = algorithm;
    bool accepted = false;
    bool fresh = false;
    bool gamer_done = false;

    if (algorithm == "CBP") {
      const std::size_t n_arm = ucb1_select(goal_count_bandit_);
      const std::size_t s_arm = ucb1_select(size_bandit_);
      const int n = static_cast<int>(n_arm) + 1;
      const double s = size_arms_[s_arm];
      record.parameters["N"] = n;
      record.parameters["S"] = s;
      const auto patterns = cbp_pack(task_, graph_, n, s, rng_);
      if (!patterns.empty() && tried_.insert(patterns).second) {
        fresh = true;
        auto candidate = build_collection(task_, patterns, Provenance::kCbp,
                                          build_limits(config_.construction_time - elapsed()), clock_);
        accepted = try_add(std::move(candidate), /*prune_after=*/false, record);
      } else {
        record.patterns = patterns;
        clock_.charge(1);
      }
      const double dt = clock_.now() - t0;
      update_bandit(goal_count_bandit_, n_arm, dt, accepted);
      update_bandit(size_bandit_, s_arm, dt, accepted);
    } else {
      const GamerStepResult step = gamer_.step(rng_, clock_, [this] { return out_of_resources(); });
      switch (step.outcome) {
        case GamerOutcome::kNewPattern: {
          record.parameters["outcome"] = "new-pattern";
          PdbCollection candidate;
          candidate.provenance = Provenance::kGamer;
          candidate.pdbs.push_back(step.pdb);
          if (tried_.insert(candidate.patterns()).second) {
            fresh = true;
            accepted = try_add(std::move(candidate), /*prune_after=*/false, record);
          } else {
            record.patterns = candidate.patterns();
          }
          break;
        }
        case GamerOutcome::kNoChange:
          record.parameters["outcome"] = "no-change";
          clock_.charge(1);
          break;
        case GamerOutcome::kTerminated:
          record.parameters["outcome"] = "terminated";
          clock_.charge(1);
          gamer_done = true;
          break;
      }
      record.parameters["candidates_evaluated"] = step.candidates_evaluated;
    }

    const double dt = clock_.now() - t0;
    update_bandit(algorithm_bandit_, arm, dt, accepted);
    if (gamer_done) {
      algorithm_bandit_.remove_arm(arm);
      stats_.gamer_terminated = true;
    }
    ++stats_.attempts;
    record.accepted = accepted;
    record.elapsed = dt;
    audit_.add(std::move(record));
    stall = fresh ? 0 : stall + 1;
  }
  stats_.phase_times.adaptive += clock_.now() - phase_start;
}

void Construction::finalize_collections() {
  const double phase_start = clock_.now();
  // Collections only enter the set through the evaluator, so a nonempty set
  // implies a drawn sample.
  if (set_.empty()) return;
  std::unordered_map<const Pdb*, std::shared_ptr<const Pdb>> replaced;
  for (auto& collection : set_.collections()) {
    for (auto& pdb : collection.pdbs) {
      if (auto it = replaced.find(pdb.get()); it != replaced.end()) {
        pdb = it->second;
        continue;
      }
      if (!pdb->can_resume()) continue;
      if (!pdb->is_dense() && pdb->settled_entries() >= config_.pdb_limits.max_entries) continue;
      if (out_of_resources()) break;
      PdbLimits limits = config_.pdb_limits;
      limits.time_budget = config_.construction_time - elapsed();
      auto resumed = std::make_shared<const Pdb>(resume_pdb(*pdb, limits, clock_));
      ++stats_.resumed_pdbs;
      if (!resumed->is_partial()) ++stats_.completed_pdbs;
      replaced.emplace(pdb.get(), resumed);
      pdb = std::move(resumed);
    }
  }
  refresh_stored_h(task_, sample_, set_);
  const std::size_t before = set_.size();
  prune_dominated(set_, sample_);
  stats_.pruned += before - set_.size();
  out_of_memory();
  stats_.phase_times.finalize += clock_.now() - phase_start;
}

const CollectionSet& Construction::run() {
  const double anchor = seed_phase();
  adaptive_construct(anchor);
  finalize_collections();
  return set_;
}

}  // namespace cpc
