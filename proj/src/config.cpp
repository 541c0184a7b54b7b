#include "hmtr/config.hpp"

#include <fstream>
#include <json.hpp>

namespace hmtr {

using nlohmann::json;

namespace {

json config_to_json(const Config& c) {
  return json{
      {"rng", c.rng},
      {"calib_path", c.calib_path},
      {"limits", {{"max_dim", c.limits.max_dim}, {"max_side", c.limits.max_side}}},
      {"engine",
       {{"enum_cap", c.engine.enum_cap},
        {"position_cap", c.engine.position_cap},
        {"subsample", c.engine.subsample},
        {"candidate_cap", c.engine.candidate_cap},
        {"search_seed", c.engine.search_seed},
        {"l_fixed", c.engine.l_fixed}}},
      {"grids",
       {{"arc_density", c.grids.arc_density},
        {"interval_points", c.grids.interval_points},
        {"torus_density", c.grids.torus_density},
        {"pipeline_density", c.grids.pipeline_density},
        {"disk_density", c.grids.disk_density},
        {"refine_tol", c.grids.refine_tol}}}};
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Config default_config() { return Config{}; }

Config load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config: " + path);
  json j = json::parse(in);
  Config c;
  maybe(j, "rng", c.rng);
  require(c.rng == "splitmix64-counter-v1",
          "unsupported rng in config: " + c.rng);
  maybe(j, "calib_path", c.calib_path);
  if (j.contains("limits")) {
    maybe(j["limits"], "max_dim", c.limits.max_dim);
    maybe(j["limits"], "max_side", c.limits.max_side);
  }
  if (j.contains("engine")) {
    const json& e = j["engine"];
    maybe(e, "enum_cap", c.engine.enum_cap);
    maybe(e, "position_cap", c.engine.position_cap);
    maybe(e, "subsample", c.engine.subsample);
    maybe(e, "candidate_cap", c.engine.candidate_cap);
    maybe(e, "search_seed", c.engine.search_seed);
    maybe(e, "l_fixed", c.engine.l_fixed);
  }
  if (j.contains("grids")) {
    const json& g = j["grids"];
    maybe(g, "arc_density", c.grids.arc_density);
    maybe(g, "interval_points", c.grids.interval_points);
    maybe(g, "torus_density", c.grids.torus_density);
    maybe(g, "pipeline_density", c.grids.pipeline_density);
    maybe(g, "disk_density", c.grids.disk_density);
    maybe(g, "refine_tol", c.grids.refine_tol);
  }
  return c;
}

std::string config_json(const Config& c) {
  return config_to_json(c).dump(2) + "\n";
}

Calibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open calibration: " + path);
  json j = json::parse(in);
  Calibration c;
  maybe(j, "provenance", c.provenance);
  maybe(j, "littlewood_c", c.littlewood_c);
  maybe(j, "multivariate_c", c.multivariate_c);
  maybe(j, "corollary_c", c.corollary_c);
  maybe(j, "decontiguize_c1", c.decontiguize_c1);
  maybe(j, "decontiguize_c2", c.decontiguize_c2);
  maybe(j, "two_axis_c", c.two_axis_c);
  maybe(j, "disk_c", c.disk_c);
  maybe(j, "wnorm_c", c.wnorm_c);
  maybe(j, "reconstruct_t_n2", c.reconstruct_t_n2);
  maybe(j, "reconstruct_t_n3", c.reconstruct_t_n3);
  return c;
}

std::string calibration_json(const Calibration& c) {
  return json{{"provenance", c.provenance},
              {"littlewood_c", c.littlewood_c},
              {"multivariate_c", c.multivariate_c},
              {"corollary_c", c.corollary_c},
              {"decontiguize_c1", c.decontiguize_c1},
              {"decontiguize_c2", c.decontiguize_c2},
              {"two_axis_c", c.two_axis_c},
              {"disk_c", c.disk_c},
              {"wnorm_c", c.wnorm_c},
              {"reconstruct_t_n2", c.reconstruct_t_n2},
              {"reconstruct_t_n3", c.reconstruct_t_n3}}
             .dump(2) +
         "\n";
}

void save_calibration(const Calibration& c, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot write calibration: " + path);
  out << calibration_json(c);
}

}  // namespace hmtr
