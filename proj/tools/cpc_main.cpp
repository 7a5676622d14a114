#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cpc/pipeline.hpp"

namespace {

std::atomic<bool> g_abort{false};

extern "C" void on_signal(int) { g_abort.store(true); }

void add_run_flags(CLI::App& cmd, cpc::PipelineOptions& o, double& construction_memory_gib,
                   double& overall_memory_gib) {
  cmd.add_option("--seed", o.construction.seed, "RNG seed")->default_val(1);
  cmd.add_option("--construction-time", o.construction.construction_time, "PDB construction time limit (s)")
      ->default_val(1080.0);
  cmd.add_option("--construction-memory", construction_memory_gib, "PDB construction memory limit (GiB)")
      ->default_val(4.0);
  cmd.add_option("--overall-time", o.overall_time, "overall time limit (s)")->default_val(1800.0);
  cmd.add_option("--overall-memory", overall_memory_gib, "overall memory limit (GiB)")->default_val(8.0);
  cmd.add_option("--max-pdb-entries", o.construction.pdb_limits.max_entries, "entry cap per explicit PDB")
      ->default_val(10'000'000);
  cmd.add_option("--seed-phase-time", o.construction.seed_phase_budget, "seeding budget per packer (s)")
      ->default_val(80.0);
  cmd.add_flag("--virtual-clock", o.virtual_clock, "measure time in deterministic work units");
}

void finish_options(cpc::PipelineOptions& o, double construction_memory_gib, double overall_memory_gib) {
  o.construction.construction_memory = construction_memory_gib * static_cast<double>(1ull << 30);
  o.overall_memory = overall_memory_gib * static_cast<double>(1ull << 30);
  o.construction.gamer.candidate_limits.max_entries = o.construction.pdb_limits.max_entries;
}

void print_summary(const cpc::RunReport& r) {
  std::cerr << r.task_id << ": " << r.coverage;
  if (r.plan_cost) std::cerr << ", cost " << *r.plan_cost << ", " << r.plan_length << " steps";
  std::cerr << ", expansions " << r.expansions << ", collections " << r.final_collections << '\n';
  if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal SAS+ planner with complementary pattern database construction"};
  app.require_subcommand(1);

  cpc::PipelineOptions solve_opts;
  double solve_cmem = 4.0, solve_omem = 8.0;
  std::string task_path, report_path, plan_path, audit_path;
  auto* solve = app.add_subcommand("solve", "construct the heuristic and search for an optimal plan");
  solve->add_option("task", task_path, "translator output (.sas)")->required();
  add_run_flags(*solve, solve_opts, solve_cmem, solve_omem);
  solve->add_option("--report", report_path, "write the JSON run report here");
  solve->add_option("--plan", plan_path, "write the plan here (IPC format)")->default_val("sas_plan");
  solve->add_option("--audit", audit_path, "write the construction audit log (JSON lines) here");

  std::string validate_task_path, validate_plan_path;
  auto* validate = app.add_subcommand("validate", "replay a plan file against a task");
  validate->add_option("task", validate_task_path)->required();
  validate->add_option("plan", validate_plan_path)->required();

  std::string dump_task_path;
  auto* dump = app.add_subcommand("dump", "print the parsed task model");
  dump->add_option("task", dump_task_path)->required();

  cpc::PipelineOptions batch_opts;
  double batch_cmem = 4.0, batch_omem = 8.0;
  std::vector<std::string> batch_tasks;
  std::string csv_path, report_dir;
  auto* batch = app.add_subcommand("batch", "solve several tasks and summarise them as CSV");
  batch->add_option("tasks", batch_tasks)->required();
  add_run_flags(*batch, batch_opts, batch_cmem, batch_omem);
  batch->add_option("--csv", csv_path, "CSV summary path (stdout when omitted)");
  batch->add_option("--report-dir", report_dir, "directory for per-task JSON reports");

  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    if (*solve) {
      finish_options(solve_opts, solve_cmem, solve_omem);
      solve_opts.task_path = task_path;
      if (!report_path.empty()) solve_opts.report_path = report_path;
      if (!plan_path.empty()) solve_opts.plan_path = plan_path;
      if (!audit_path.empty()) solve_opts.audit_path = audit_path;
      const auto result = cpc::run_pipeline(solve_opts, &g_abort);
      print_summary(result.report);
      return static_cast<int>(result.exit_code);
    }

    if (*validate) {
      const auto task = cpc::parse_sas_file(validate_task_path);
      std::ifstream in(validate_plan_path);
      if (!in) {
        std::cerr << "cannot open plan '" << validate_plan_path << "'\n";
        return static_cast<int>(cpc::ExitCode::kInputError);
      }
      const auto v = cpc::validate_plan(task, cpc::read_plan(in));
      if (v.valid) {
        std::cout << "valid plan, cost " << v.cost << '\n';
        return 0;
      }
      std::cout << "invalid plan: " << v.reason << '\n';
      return static_cast<int>(cpc::ExitCode::kInternalError);
    }

    if (*dump) {
      cpc::dump_task(cpc::parse_sas_file(dump_task_path), std::cout);
      return 0;
    }

    if (*batch) {
      finish_options(batch_opts, batch_cmem, batch_omem);
      if (!report_dir.empty()) std::filesystem::create_directories(report_dir);
      std::vector<cpc::RunReport> reports;
      for (const auto& t : batch_tasks) {
        cpc::PipelineOptions o = batch_opts;
        o.task_path = t;
        if (!report_dir.empty()) {
          o.report_path = std::filesystem::path(report_dir) / (std::filesystem::path(t).stem().string() + ".json");
        }
        auto result = cpc::run_pipeline(o, &g_abort);
        print_summary(result.report);
        reports.push_back(std::move(result.report));
      }
      if (csv_path.empty()) {
        cpc::write_batch_csv(reports, std::cout);
      } else {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
        cpc::write_batch_csv(reports, out);
      }
      return 0;
    }
  } catch (const cpc::SasError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return static_cast<int>(cpc::ExitCode::kInputError);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(cpc::ExitCode::kInternalError);
  }
  return 0;
}
