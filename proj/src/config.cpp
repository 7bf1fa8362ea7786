#include "conifold/config.hpp"

#include <fstream>

#include "conifold/parallel.hpp"

namespace conifold {

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.data = json::object();
  cfg.data["schema_version"] = 1;
  cfg.data["seed"] = 20240901;
  cfg.data["jobs"] = 0;  // 0: CONIFOLD_LAB_JOBS or hardware concurrency
  cfg.data["tolerance_scale"] = 1.0;

  cfg.data["profile"] = {
      {"samples", 200},
      {"t_min", 1e-3},
      {"t_max", 1.0},
      {"ratio_min", 1.001},
      {"ratio_max", 1e3},
      {"tau_points", 1000},
      {"tau_min", 1e-3},
      {"tau_max", 20.0},
      {"convergence",
       {{"delta", 0.25}, {"t_list", {1e-1, 1e-2, 1e-3, 1e-4}}, {"grid", 60}}},
      {"ratio",
       {{"delta_prime", 0.05}, {"delta", 0.2}, {"t", 1e-4}, {"grid", 80}}},
      {"asymptotic", {{"t", 0.05}, {"points", 60}, {"ratio_max", 1e6}}}};

  cfg.data["cutoff"] = {{"n_list", {50, 100, 500, 1000}},
                        {"grid_points", 4000}};

  cfg.data["positivity"] = {
      {"n_list", {100, 200, 400}},
      {"c0_max", 1e6},
      {"grid", {{"n_z", 5}, {"n_r", 3}, {"n_dir", 3}, {"n_phase", 4}}},
      {"scenario", {{"preset", "default"}}},
      {"oracle_points", 20},
      {"random_scenarios", 5},
      {"phi_identity_n", 50}};

  cfg.data["curvature"] = {
      {"t_list", {1e-2, 1e-1, 1.0}},
      {"ratio_list", {1.001, 1.1, 3.0, 30.0, 100.0}},
      {"extended_t_list", {1e-3, 1e-2, 1e-1, 1.0}},
      {"extended_ratio_list", {1.001, 1.1, 3.0, 30.0, 100.0, 1000.0}},
      {"fd_oracle_samples", 6},
      {"s3_t_list", {0.1, 1.0}},
      {"s3_eps_list", {0.04, 0.02, 0.01, 0.005}}};
  return cfg;
}

namespace {

void deep_merge(json& base, const json& patch) {
  if (!patch.is_object() || !base.is_object()) {
    base = patch;
    return;
  }
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (base.contains(it.key()))
      deep_merge(base[it.key()], it.value());
    else
      base[it.key()] = it.value();
  }
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file: " + path);
  json patch;
  try {
    f >> patch;
  } catch (const std::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg = defaults();
  deep_merge(cfg.data, patch);
  cfg.validate();
  return cfg;
}

void RunConfig::apply_overrides(std::optional<int> jobs,
                                std::optional<uint64_t> seed,
                                std::optional<double> tolerance_scale) {
  if (jobs) data["jobs"] = *jobs;
  if (seed) data["seed"] = *seed;
  if (tolerance_scale) data["tolerance_scale"] = *tolerance_scale;
  validate();
}

void RunConfig::validate() const {
  if (data.value("schema_version", 0) != 1)
    throw config_error("config: schema_version must be 1");
  if (!(data.value("tolerance_scale", 1.0) > 0.0))
    throw config_error("config: tolerance_scale must be positive");
  const json& prof = section("profile");
  if (!(prof.value("t_min", 0.0) > 0.0))
    throw config_error("config: profile.t_min must be positive");
  if (!(prof.value("ratio_min", 0.0) > 1.0))
    throw config_error("config: profile.ratio_min must exceed 1");
  for (const json& t : section("cutoff").at("n_list"))
    if (t.get<int>() < 4) throw config_error("config: cutoff n_list needs n >= 4");
  for (const json& t : section("profile").at("convergence").at("t_list"))
    if (!(t.get<double>() >= 0.0))
      throw config_error("config: convergence t_list must be nonnegative");
  if (section("positivity").at("n_list").empty() ||
      section("curvature").at("t_list").empty())
    throw config_error("config: empty grid list");
}

int RunConfig::jobs() const {
  int j = data.value("jobs", 0);
  return j > 0 ? j : default_jobs();
}

uint64_t RunConfig::seed() const { return data.value("seed", uint64_t{0}); }

double RunConfig::tol(double base) const {
  return base * data.value("tolerance_scale", 1.0);
}

const json& RunConfig::section(const std::string& name) const {
  if (!data.contains(name)) throw config_error("config: missing section " + name);
  return data.at(name);
}

namespace {

json poly_to_json(const PolyZ& p) {
  json rows = json::array();
  for (int m = 0; m <= PolyZ::deg; ++m) {
    json row = json::array();
    for (int n = 0; n <= PolyZ::deg; ++n)
      row.push_back({p.coef[m][n].real(), p.coef[m][n].imag()});
    rows.push_back(row);
  }
  return rows;
}

PolyZ poly_from_json(const json& j) {
  PolyZ p;
  for (int m = 0; m <= PolyZ::deg; ++m)
    for (int n = 0; n <= PolyZ::deg; ++n)
      p.coef[m][n] = cplx(j.at(m).at(n).at(0).get<double>(),
                          j.at(m).at(n).at(1).get<double>());
  return p;
}

}  // namespace

json scenario_to_json(const ScenarioH& s) {
  json j;
  j["a"] = poly_to_json(s.a);
  j["b"] = poly_to_json(s.b);
  j["h2_p"] = poly_to_json(s.h2_p);
  j["h2_q"] = poly_to_json(s.h2_q);
  j["ambient_scale"] = s.ambient_scale;
  j["fs_scale"] = s.fs_scale;
  return j;
}

ScenarioH scenario_from_json(const json& j, std::mt19937_64& rng) {
  std::string preset = j.value("preset", "default");
  ScenarioH s;
  if (preset == "default")
    s = ScenarioH::default_scenario();
  else if (preset == "trivial")
    s = ScenarioH::trivial();
  else if (preset == "random")
    s = ScenarioH::random_scenario(rng);
  else if (preset == "explicit") {
    s.a = poly_from_json(j.at("a"));
    s.b = poly_from_json(j.at("b"));
    s.h2_p = poly_from_json(j.at("h2_p"));
    s.h2_q = poly_from_json(j.at("h2_q"));
  } else {
    throw config_error("config: unknown scenario preset " + preset);
  }
  if (j.contains("ambient_scale")) s.ambient_scale = j.at("ambient_scale");
  if (j.contains("fs_scale")) s.fs_scale = j.at("fs_scale");
  return s;
}

}  // namespace conifold
