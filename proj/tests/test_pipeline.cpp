#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpc/pipeline.hpp"
#include "support.hpp"

using namespace cpc;

namespace {

PipelineOptions quick_options(const std::string& fixture) {
  PipelineOptions o;
  o.task_path = cpc::testing::fixture_path(fixture);
  o.virtual_clock = true;
  o.construction.construction_time = 5.0;
  o.construction.seed_phase_budget = 1.0;
  o.construction.sample_limits.max_states = 500;
  o.construction.gamer.sample_limits.max_states = 500;
  o.overall_time = 60.0;
  return o;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cpc_pipeline_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("toy task end to end") {
    const auto dir = temp_dir();
    auto o = quick_options("toy.sas");
    o.plan_path = dir / "toy.plan";
    o.report_path = dir / "toy.json";
    o.audit_path = dir / "toy.jsonl";
    const auto r = run_pipeline(o);
    CHECK(r.exit_code == ExitCode::kSolved);
    REQUIRE(r.report.plan_cost.has_value());
    CHECK(*r.report.plan_cost == 5);
    CHECK(slurp(dir / "toy.plan").find("; cost = 5 (general cost)") != std::string::npos);

    const auto report = nlohmann::json::parse(slurp(dir / "toy.json"));
    CHECK(report["coverage"] == "solved");
    CHECK(report["plan_cost"] == 5);
    CHECK(report["initial_h"] == 5);
    for (const char* key : {"final_collections", "final_pdbs", "partial_pdbs", "attempts", "accepted", "pruned",
                            "accepted_by_provenance", "final_by_provenance"}) {
      CHECK(report["census"].contains(key));
    }
    for (const char* key : {"seed", "adaptive", "finalize", "search"}) CHECK(report["phases"].contains(key));
    CHECK(report["census"]["accepted"].get<int>() >= 1);
    CHECK(slurp(dir / "toy.jsonl") == r.audit_jsonl);
  }

  TEST_CASE("no construction time still solves blindly") {
    auto o = quick_options("toy.sas");
    o.construction.construction_time = 0.0;
    const auto r = run_pipeline(o);
    CHECK(r.exit_code == ExitCode::kSolved);
    CHECK(*r.report.plan_cost == 5);
    CHECK(r.report.final_collections == 0);
    CHECK(r.report.initial_h == 0);
  }

  TEST_CASE("missing task file is an input error") {
    auto o = quick_options("does-not-exist.sas");
    const auto r = run_pipeline(o);
    CHECK(r.exit_code == ExitCode::kInputError);
    CHECK(r.report.error.rfind("parse:", 0) == 0);
  }

  TEST_CASE("unsolvable task") {
    SasTask t = cpc::testing::toy_task();
    t.operators.pop_back();
    const auto r = solve_task(t, "stuck", quick_options("toy.sas"));
    CHECK(r.exit_code == ExitCode::kUnsolvable);
    CHECK(r.report.coverage == "unsolvable");
  }

  TEST_CASE("search time limit yields a failed report with statistics") {
    auto o = quick_options("gripper.sas");
    o.construction.construction_time = 0.0;
    o.overall_time = 1e-4;
    const auto r = run_pipeline(o);
    CHECK(r.exit_code == ExitCode::kLimitExceeded);
    CHECK(r.report.coverage == "failed");
    CHECK(r.report.error == "search: limit exceeded");
    CHECK(r.report.expansions > 0);
  }

  TEST_CASE("batch csv") {
    std::vector<RunReport> reports;
    for (const char* f : {"toy.sas", "gripper.sas", "blocks.sas"}) reports.push_back(run_pipeline(quick_options(f)).report);
    std::ostringstream out;
    write_batch_csv(reports, out);
    std::istringstream in(out.str());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "task,coverage,init_h,expansions,search_time,total_time,memory_kb");
    CHECK(lines[1].rfind("toy.sas,solved,", 0) == 0);
    CHECK(lines[4].rfind("mean,3,", 0) == 0);
  }
}
