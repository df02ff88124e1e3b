#pragma once

/**
 * @file config.hpp
 * @brief File-backed run configuration.
 *
 * JSON with four optional sections. Every field has a default equal to the
 * nominal case, unknown keys are rejected, and `key.path=value` overrides
 * are applied to the document before it is parsed.
 *
 *     {
 *       "problem":    {"mean_motion", "r_init", "v_init", "v_max", "u_max",
 *                      "r_keepout", "rho_keepout", "sigma_min", "sigma_max"},
 *       "scp":        {"nodes", "w_tr", "w_vc", "w_vb", "omega", "rho", "k_max",
 *                      "eps_tr", "eps_vc", "eps_vb", "max_scp_iters", "substeps",
 *                      "time_grid", "power_iter_tol", "power_iter_max",
 *                      "spectral_margin"},
 *       "montecarlo": {"n_samples", "position_std", "seed", "max_scp_iters",
 *                      "workers"},
 *       "io":         {"out_dir", "dense_trajectory", "sample_trajectories"}
 *     }
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipgscp/verify.hpp"

namespace pipgscp {

struct MonteCarloSettings
{
  int n_samples = 128;
  double position_std = 25.0;
  std::uint64_t seed = 20240607;
  int max_scp_iters = 30;
  int workers = 0;
};

struct IoSettings
{
  std::string out_dir = "out";
  /// write the single-shooting trajectory next to the node table
  bool dense_trajectory = true;
  /// write one trajectory file per Monte Carlo sample
  bool sample_trajectories = true;
};

struct RunConfig
{
  ProblemSpec problem;
  ScpConfig scp;
  MonteCarloSettings montecarlo;
  IoSettings io;

  /// Monte Carlo campaign built from the problem, scp and montecarlo sections.
  MonteCarloConfig montecarlo_config() const;
};

/// Malformed documents, unknown keys, wrong types and bad overrides. The
/// message names the offending key.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& doc);

/// Set one dotted path, e.g. "scp.max_scp_iters=1". The value is parsed as
/// JSON when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads `path` (empty means defaults only), applies overrides in order,
/// parses and validates.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace pipgscp
