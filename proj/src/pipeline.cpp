#include "cpc/pipeline.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

namespace cpc {

namespace {

std::vector<ArmSnapshot> snapshot(const BanditState& b) {
  std::vector<ArmSnapshot> arms;
  for (const auto& a : b.arms) arms.push_back({a.label, a.total_reward, a.pulled_time});
  return arms;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

PipelineResult solve_task(const SasTask& task, const std::string& task_id, const PipelineOptions& options,
                          const std::atomic<bool>* abort_flag) {
  PipelineResult result;
  RunReport& report = result.report;
  report.task_id = task_id;
  report.seed = options.construction.seed;
  report.virtual_clock = options.virtual_clock;

  std::unique_ptr<Clock> clock;
  if (options.virtual_clock) {
    clock = std::make_unique<VirtualClock>(options.virtual_seconds_per_unit);
  } else {
    clock = std::make_unique<WallClock>();
  }
  const double start = clock->now();

  ConstructionConfig config = options.construction;
  config.construction_time = std::min(config.construction_time, options.overall_time);
  config.gamer.candidate_limits.max_entries = std::min(config.gamer.candidate_limits.max_entries,
                                                       config.pdb_limits.max_entries);
  Construction construction(task, config, *clock, abort_flag);
  construction.run();

  const auto& stats = construction.stats();
  const auto& set = construction.collections();
  report.phases = stats.phase_times;
  report.attempts = stats.attempts;
  report.accepted = stats.accepted;
  report.pruned = stats.pruned;
  report.accepted_by_provenance = stats.accepted_by_provenance;
  report.final_collections = set.size();
  for (const auto& c : set.collections()) {
    ++report.final_by_provenance[to_string(c.provenance)];
    report.final_pdbs += c.pdbs.size();
    for (const auto& p : c.pdbs) report.partial_pdbs += p->is_partial() ? 1 : 0;
  }
  report.sample_size = construction.sample().size();
  report.resample_time = construction.sample().resample_time_spent;
  report.largest_seed_size = construction.largest_seed_size();
  report.bandits["algorithm"] = snapshot(construction.algorithm_bandit());
  report.bandits["goals_per_bin"] = snapshot(construction.goal_count_bandit());
  report.bandits["size_limit"] = snapshot(construction.size_bandit());
  {
    std::ostringstream audit;
    construction.audit().write_jsonl(audit);
    result.audit_jsonl = audit.str();
  }

  SearchLimits limits;
  limits.time = options.overall_time - (clock->now() - start);
  limits.memory_bytes = options.overall_memory - static_cast<double>(set.memory_bytes());
  limits.abort_flag = abort_flag;
  const SearchResult search = astar_search(task, set, limits, *clock);

  report.initial_h = search.initial_h;
  report.expansions = search.expansions;
  report.evaluated = search.evaluated;
  report.generated = search.generated;
  report.search_time = search.search_time;
  report.peak_memory_bytes =
      std::max(stats.peak_memory_bytes, static_cast<double>(set.memory_bytes()) + search.peak_memory_bytes);
  report.status = to_string(search.status);

  switch (search.status) {
    case SearchStatus::kSolved: {
      result.plan = plan_names(task, search.plan);
      const PlanValidation v = validate_plan(task, result.plan);
      if (!v.valid || v.cost != search.cost) {
        report.coverage = "failed";
        report.error = "validate: " + (v.valid ? std::string("plan cost mismatch") : v.reason);
        result.exit_code = ExitCode::kInternalError;
      } else {
        report.coverage = "solved";
        report.plan_cost = search.cost;
        report.plan_length = result.plan.size();
        result.exit_code = ExitCode::kSolved;
      }
      break;
    }
    case SearchStatus::kUnsolvable:
      report.coverage = "unsolvable";
      result.exit_code = ExitCode::kUnsolvable;
      break;
    case SearchStatus::kLimitExceeded:
      report.coverage = "failed";
      report.error = (abort_flag && abort_flag->load()) ? "search: interrupted" : "search: limit exceeded";
      result.exit_code = ExitCode::kLimitExceeded;
      break;
  }
  report.total_time = clock->now() - start;
  return result;
}

PipelineResult run_pipeline(const PipelineOptions& options, const std::atomic<bool>* abort_flag) {
  PipelineResult result;
  const std::string task_id = options.task_path.filename().string();
  SasTask task;
  try {
    task = parse_sas_file(options.task_path);
  } catch (const SasError& e) {
    result.exit_code = ExitCode::kInputError;
    result.report.task_id = task_id;
    result.report.seed = options.construction.seed;
    result.report.virtual_clock = options.virtual_clock;
    result.report.status = "input-error";
    result.report.error = std::string("parse: ") + e.what();
    if (options.report_path) write_report(result.report, *options.report_path);
    return result;
  }

  result = solve_task(task, task_id, options, abort_flag);
  if (options.plan_path && result.exit_code == ExitCode::kSolved) {
    std::ostringstream plan;
    write_plan(plan, result.plan, *result.report.plan_cost, task.unit_cost);
    write_text(*options.plan_path, plan.str());
  }
  if (options.audit_path) write_text(*options.audit_path, result.audit_jsonl);
  if (options.report_path) write_report(result.report, *options.report_path);
  return result;
}

nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["task"] = r.task_id;
  j["coverage"] = r.coverage;
  j["status"] = r.status;
  j["error"] = r.error;
  j["seed"] = r.seed;
  j["virtual_clock"] = r.virtual_clock;
  j["plan_cost"] = r.plan_cost ? nlohmann::json(*r.plan_cost) : nlohmann::json(nullptr);
  j["plan_length"] = r.plan_length;
  if (!r.initial_h) {
    j["initial_h"] = nullptr;
  } else if (*r.initial_h == kInfiniteCost) {
    j["initial_h"] = "infinity";
  } else {
    j["initial_h"] = *r.initial_h;
  }
  j["expansions"] = r.expansions;
  j["evaluated"] = r.evaluated;
  j["generated"] = r.generated;
  j["search_time"] = r.search_time;
  j["total_time"] = r.total_time;
  j["peak_memory_kb"] = r.peak_memory_bytes / 1024.0;
  j["phases"] = {{"seed", r.phases.seed}, {"adaptive", r.phases.adaptive}, {"finalize", r.phases.finalize},
                 {"search", r.search_time}};
  j["census"] = {{"final_collections", r.final_collections},
                 {"final_pdbs", r.final_pdbs},
                 {"partial_pdbs", r.partial_pdbs},
                 {"attempts", r.attempts},
                 {"accepted", r.accepted},
                 {"pruned", r.pruned},
                 {"accepted_by_provenance", r.accepted_by_provenance},
                 {"final_by_provenance", r.final_by_provenance}};
  j["sample"] = {{"size", r.sample_size}, {"resample_time", r.resample_time}};
  j["largest_seed_size"] = r.largest_seed_size;
  auto& bandits = j["bandits"] = nlohmann::json::object();
  for (const auto& [name, arms] : r.bandits) {
    auto& list = bandits[name] = nlohmann::json::array();
    for (const auto& a : arms) list.push_back({{"label", a.label}, {"reward", a.reward}, {"time", a.time}});
  }
  return j;
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  write_text(path, report_to_json(report).dump(2) + "\n");
}

void write_batch_csv(const std::vector<RunReport>& reports, std::ostream& out) {
  out << "task,coverage,init_h,expansions,search_time,total_time,memory_kb\n";
  out << std::setprecision(6) << std::fixed;
  std::size_t solved = 0;
  double init_h = 0, expansions = 0, search_time = 0, total_time = 0, memory = 0;
  for (const auto& r : reports) {
    const double h = (r.initial_h && *r.initial_h != kInfiniteCost) ? static_cast<double>(*r.initial_h) : 0.0;
    out << r.task_id << ',' << r.coverage << ',' << h << ',' << r.expansions << ',' << r.search_time << ','
        << r.total_time << ',' << r.peak_memory_bytes / 1024.0 << '\n';
    solved += r.coverage == "solved" ? 1 : 0;
    init_h += h;
    expansions += static_cast<double>(r.expansions);
    search_time += r.search_time;
    total_time += r.total_time;
    memory += r.peak_memory_bytes / 1024.0;
  }
  const double n = reports.empty() ? 1.0 : static_cast<double>(reports.size());
  out << "mean," << solved << ',' << init_h / n << ',' << expansions / n << ',' << search_time / n << ','
      << total_time / n << ',' << memory / n << '\n';
}

}  // namespace cpc
