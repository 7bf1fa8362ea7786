#pragma once

#include <optional>
#include <string>

#include "conifold/report.hpp"
#include "conifold/resolved_frame.hpp"

namespace conifold {

// Versioned key-value run configuration.  Defaults cover every command; a
// config file overrides the defaults and command-line flags override the
// file.  The full effective config is echoed into every report, so a run is
// reproducible from its report alone.
struct RunConfig {
  json data;

  static RunConfig defaults();
  static RunConfig from_file(const std::string& path);
  void apply_overrides(std::optional<int> jobs, std::optional<uint64_t> seed,
                       std::optional<double> tolerance_scale);
  void validate() const;

  int jobs() const;
  uint64_t seed() const;
  double tol(double base) const;  // base tolerance * tolerance_scale

  const json& section(const std::string& name) const;
};

ScenarioH scenario_from_json(const json& j, std::mt19937_64& rng);
json scenario_to_json(const ScenarioH& s);

}  // namespace conifold
