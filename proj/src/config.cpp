#include "pipgscp/config.hpp"

#include <fstream>

namespace pipgscp {

using nlohmann::json;

namespace {

json vec3_json(const Vec3& v)
{
  return json::array({v[0], v[1], v[2]});
}

std::string grid_name(GridKind g)
{
  return g == GridKind::UnitIntervals ? "unit_intervals" : "normalized";
}

// Typed read of doc[section][key] that reports the dotted key on failure.
class Reader
{
public:
  Reader(const json& doc, std::string section) : doc_(doc.at(section)), section_(std::move(section)) {}

  template <typename T>
  T get(const std::string& key) const
  {
    try {
      return doc_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + section_ + "." + key + "' has the wrong type");
    }
  }

  Vec3 vec3(const std::string& key) const
  {
    const auto v = get<std::vector<double>>(key);
    if (v.size() != 3) {
      throw ConfigError("config key '" + section_ + "." + key + "' must have three entries");
    }
    return {v[0], v[1], v[2]};
  }

private:
  const json& doc_;
  std::string section_;
};

// Copies `src` over `dst`, rejecting keys that `dst` does not have.
void merge_known(json& dst, const json& src, const std::string& prefix)
{
  if (!src.is_object()) {
    throw ConfigError("config " + (prefix.empty() ? std::string("document") : "section '" + prefix + "'") +
                      " must be an object");
  }
  for (const auto& [key, value] : src.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!dst.contains(key)) {
      throw ConfigError("unknown config key '" + path + "'");
    }
    if (dst[key].is_object()) {
      merge_known(dst[key], value, path);
    } else {
      dst[key] = value;
    }
  }
}

}  // namespace

MonteCarloConfig RunConfig::montecarlo_config() const
{
  MonteCarloConfig mc;
  mc.n_samples = montecarlo.n_samples;
  mc.position_std = montecarlo.position_std;
  mc.seed = montecarlo.seed;
  mc.workers = montecarlo.workers;
  mc.spec = problem;
  mc.scp = scp;
  mc.scp.max_iterations = montecarlo.max_scp_iters;
  return mc;
}

json to_json(const RunConfig& cfg)
{
  const ProblemSpec& p = cfg.problem;
  const ScpConfig& s = cfg.scp;
  json doc;
  doc["problem"] = {
      {"mean_motion", p.cw.mean_motion}, {"r_init", vec3_json(p.r_init)},
      {"v_init", vec3_json(p.v_init)},   {"v_max", p.v_max},
      {"u_max", p.u_max},                {"r_keepout", vec3_json(p.r_keepout)},
      {"rho_keepout", p.rho_keepout},    {"sigma_min", p.sigma_min},
      {"sigma_max", p.sigma_max},
  };
  doc["scp"] = {
      {"nodes", s.nodes},
      {"w_tr", s.weights.trust_region},
      {"w_vc", s.weights.virtual_control},
      {"w_vb", s.weights.virtual_buffer},
      {"omega", s.pipg.omega},
      {"rho", s.pipg.rho},
      {"k_max", s.pipg.k_max},
      {"eps_tr", s.eps_trust_region},
      {"eps_vc", s.eps_virtual_control},
      {"eps_vb", s.eps_virtual_buffer},
      {"max_scp_iters", s.max_iterations},
      {"substeps", s.substeps},
      {"time_grid", grid_name(s.time_grid)},
      {"power_iter_tol", s.pipg.power_iter_tol},
      {"power_iter_max", s.pipg.power_iter_max},
      {"spectral_margin", s.pipg.spectral_margin},
  };
  doc["montecarlo"] = {
      {"n_samples", cfg.montecarlo.n_samples},
      {"position_std", cfg.montecarlo.position_std},
      {"seed", cfg.montecarlo.seed},
      {"max_scp_iters", cfg.montecarlo.max_scp_iters},
      {"workers", cfg.montecarlo.workers},
  };
  doc["io"] = {
      {"out_dir", cfg.io.out_dir},
      {"dense_trajectory", cfg.io.dense_trajectory},
      {"sample_trajectories", cfg.io.sample_trajectories},
  };
  return doc;
}

RunConfig config_from_json(const json& doc)
{
  json full = to_json(RunConfig{});
  merge_known(full, doc, "");

  RunConfig cfg;
  const Reader p(full, "problem");
  cfg.problem.cw.mean_motion = p.get<double>("mean_motion");
  cfg.problem.r_init = p.vec3("r_init");
  cfg.problem.v_init = p.vec3("v_init");
  cfg.problem.v_max = p.get<double>("v_max");
  cfg.problem.u_max = p.get<double>("u_max");
  cfg.problem.r_keepout = p.vec3("r_keepout");
  cfg.problem.rho_keepout = p.get<double>("rho_keepout");
  cfg.problem.sigma_min = p.get<double>("sigma_min");
  cfg.problem.sigma_max = p.get<double>("sigma_max");

  const Reader s(full, "scp");
  cfg.scp.nodes = s.get<int>("nodes");
  cfg.scp.weights.trust_region = s.get<double>("w_tr");
  cfg.scp.weights.virtual_control = s.get<double>("w_vc");
  cfg.scp.weights.virtual_buffer = s.get<double>("w_vb");
  cfg.scp.pipg.omega = s.get<double>("omega");
  cfg.scp.pipg.rho = s.get<double>("rho");
  cfg.scp.pipg.k_max = s.get<int>("k_max");
  cfg.scp.eps_trust_region = s.get<double>("eps_tr");
  cfg.scp.eps_virtual_control = s.get<double>("eps_vc");
  cfg.scp.eps_virtual_buffer = s.get<double>("eps_vb");
  cfg.scp.max_iterations = s.get<int>("max_scp_iters");
  cfg.scp.substeps = s.get<int>("substeps");
  cfg.scp.pipg.power_iter_tol = s.get<double>("power_iter_tol");
  cfg.scp.pipg.power_iter_max = s.get<int>("power_iter_max");
  cfg.scp.pipg.spectral_margin = s.get<double>("spectral_margin");
  const auto grid = s.get<std::string>("time_grid");
  if (grid == "unit_intervals") {
    cfg.scp.time_grid = GridKind::UnitIntervals;
  } else if (grid == "normalized") {
    cfg.scp.time_grid = GridKind::Normalized;
  } else {
    throw ConfigError("config key 'scp.time_grid' must be 'unit_intervals' or 'normalized'");
  }

  const Reader m(full, "montecarlo");
  cfg.montecarlo.n_samples = m.get<int>("n_samples");
  cfg.montecarlo.position_std = m.get<double>("position_std");
  cfg.montecarlo.seed = m.get<std::uint64_t>("seed");
  cfg.montecarlo.max_scp_iters = m.get<int>("max_scp_iters");
  cfg.montecarlo.workers = m.get<int>("workers");

  const Reader io(full, "io");
  cfg.io.out_dir = io.get<std::string>("out_dir");
  cfg.io.dense_trajectory = io.get<bool>("dense_trajectory");
  cfg.io.sample_trajectories = io.get<bool>("sample_trajectories");

  try {
    cfg.problem.validate();
    cfg.scp.validate();
    cfg.montecarlo_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void apply_override(json& doc, const std::string& assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) {
      throw ConfigError("override key '" + path + "' has an empty component");
    }
    if (!node->is_object()) {
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides)
{
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) {
      throw ConfigError("cannot open config file '" + path + "'");
    }
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
  }
  for (const auto& o : overrides) {
    apply_override(doc, o);
  }
  return config_from_json(doc);
}

}  // namespace pipgscp
