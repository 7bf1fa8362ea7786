#pragma once

#include <map>
#include <string>
#include <vector>

#include "conifold/config.hpp"
#include "conifold/report.hpp"

namespace conifold {

// Report plus the artifacts (CSV tables, JSON frontier) the command emits;
// the CLI writes each map entry under the output directory.
struct CommandOutput {
  ReportDocument report;
  std::map<std::string, std::string> files;
};

CommandOutput cmd_profile(const RunConfig& cfg);
CommandOutput cmd_cutoff(const RunConfig& cfg);
CommandOutput cmd_positivity(const RunConfig& cfg);
CommandOutput cmd_curvature(const RunConfig& cfg);
ReportDocument cmd_report(const std::vector<std::string>& report_paths);

}  // namespace conifold
