#pragma once

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpc/construction.hpp"
#include "cpc/search.hpp"

namespace cpc {

enum class ExitCode : int {
  kSolved = 0,
  kInternalError = 1,
  kInputError = 2,
  kUnsolvable = 3,
  kLimitExceeded = 4,
};

struct PipelineOptions {
  std::filesystem::path task_path;
  ConstructionConfig construction;
  double overall_time = 1800.0;
  double overall_memory = 8.0 * (1ull << 30);
  bool virtual_clock = false;
  double virtual_seconds_per_unit = 1e-6;
  std::optional<std::filesystem::path> report_path;
  std::optional<std::filesystem::path> plan_path;
  std::optional<std::filesystem::path> audit_path;
};

struct ArmSnapshot {
  std::string label;
  double reward = 0.0;
  double time = 0.0;
};

struct RunReport {
  std::string task_id;
  std::string coverage = "failed";  // solved | unsolvable | failed
  std::string status;               // finer-grained outcome
  std::string error;                // stage-tagged message, empty on success
  std::uint64_t seed = 0;
  bool virtual_clock = false;
  std::optional<Cost> plan_cost;
  std::size_t plan_length = 0;
  std::optional<Cost> initial_h;
  std::uint64_t expansions = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t generated = 0;
  double search_time = 0.0;
  double total_time = 0.0;
  double peak_memory_bytes = 0.0;
  PhaseTimes phases;
  std::size_t final_collections = 0;
  std::size_t final_pdbs = 0;
  std::size_t partial_pdbs = 0;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::size_t pruned = 0;
  std::map<std::string, std::size_t> accepted_by_provenance;
  std::map<std::string, std::size_t> final_by_provenance;
  std::size_t sample_size = 0;
  double resample_time = 0.0;
  double largest_seed_size = 0.0;
  std::map<std::string, std::vector<ArmSnapshot>> bandits;
};

struct PipelineResult {
  ExitCode exit_code = ExitCode::kInternalError;
  RunReport report;
  std::vector<std::string> plan;
  std::string audit_jsonl;
};

/// Parses the task file, builds the heuristic, searches, validates the plan
/// and writes whichever outputs `options` names.
PipelineResult run_pipeline(const PipelineOptions& options, const std::atomic<bool>* abort_flag = nullptr);

/// Same as run_pipeline for an already parsed task; writes no files.
PipelineResult solve_task(const SasTask& task, const std::string& task_id, const PipelineOptions& options,
                          const std::atomic<bool>* abort_flag = nullptr);

nlohmann::json report_to_json(const RunReport& report);
/// Throws std::runtime_error when the file cannot be written.
void write_report(const RunReport& report, const std::filesystem::path& path);

/// One row per report plus a trailing mean row (coverage column counts
/// solved tasks).
void write_batch_csv(const std::vector<RunReport>& reports, std::ostream& out);

}  // namespace cpc
