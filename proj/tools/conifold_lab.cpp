// conifold-lab: verification front end for the conifold metric library.
// Subcommands evaluate one module family each and write a JSON report plus
// CSV/JSON artifacts; `report` merges prior runs into one verdict.
//
// Exit codes: 0 all checks pass, 1 usage/config error, 2 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "conifold/commands.hpp"

namespace fs = std::filesystem;
using namespace conifold;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> jobs;
  std::optional<uint64_t> seed;
  std::optional<double> tolerance_scale;
  bool timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--jobs", opts.jobs,
                  "worker threads (default: CONIFOLD_LAB_JOBS or all cores)");
  cmd->add_option("--seed", opts.seed, "random seed for scenario sampling");
  cmd->add_option("--tolerance-scale", opts.tolerance_scale,
                  "multiply every tolerance (values < 1 tighten)");
  cmd->add_flag("--timings", opts.timings,
                "include wall-time fields in the report (reports are "
                "byte-reproducible only without them)");
}

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty() ? RunConfig::defaults()
                                           : RunConfig::from_file(opts.config_path);
  cfg.apply_overrides(opts.jobs, opts.seed, opts.tolerance_scale);
  return cfg;
}

int emit(const CommandOutput& out, const CommonOpts& opts) {
  fs::create_directories(opts.out_dir);
  std::string name = out.report.command + "_report.json";
  write_text_file((fs::path(opts.out_dir) / name).string(),
                  out.report.to_json(opts.timings).dump(2) + "\n");
  for (const auto& [file, content] : out.files)
    write_text_file((fs::path(opts.out_dir) / file).string(), content);
  for (const CheckRecord& c : out.report.checks)
    std::printf("[%s] %s\n", c.pass ? "PASS" : "FAIL", c.check_id.c_str());
  std::printf("%s: %s (%s)\n", out.report.command.c_str(),
              out.report.overall() ? "pass" : "FAIL",
              (fs::path(opts.out_dir) / name).string().c_str());
  return out.report.overall() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conifold metric verification lab"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::vector<std::string> report_inputs;

  CLI::App* profile = app.add_subcommand(
      "profile", "radial profiles: ODE residuals, monotonicity, convergence");
  CLI::App* cutoff =
      app.add_subcommand("cutoff", "piecewise cutoff chi and its bounds");
  CLI::App* positivity = app.add_subcommand(
      "positivity", "glued-form positivity: alpha oracle, minors, C0 frontier");
  CLI::App* curvature = app.add_subcommand(
      "curvature", "deformed-conifold curvature, volume and tip limits");
  CLI::App* report =
      app.add_subcommand("report", "merge prior reports into one verdict");
  for (CLI::App* c : {profile, cutoff, positivity, curvature, report})
    add_common(c, opts);
  report->add_option("inputs", report_inputs, "report JSON files to merge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (profile->parsed()) return emit(cmd_profile(load_config(opts)), opts);
    if (cutoff->parsed()) return emit(cmd_cutoff(load_config(opts)), opts);
    if (positivity->parsed())
      return emit(cmd_positivity(load_config(opts)), opts);
    if (curvature->parsed())
      return emit(cmd_curvature(load_config(opts)), opts);
    if (report->parsed()) {
      ReportDocument merged = cmd_report(report_inputs);
      fs::create_directories(opts.out_dir);
      write_text_file(
          (fs::path(opts.out_dir) / "merged_report.json").string(),
          merged.to_json(opts.timings).dump(2) + "\n");
      std::printf("overall: %s (%zu checks)\n",
                  merged.overall() ? "pass" : "FAIL", merged.checks.size());
      return merged.overall() ? 0 : 2;
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verification error: %s\n", e.what());
    return 2;
  }
  return 1;
}
