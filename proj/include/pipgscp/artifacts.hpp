#pragma once

/**
 * @file artifacts.hpp
 * @brief Result files written by the command-line tool.
 *
 * Column contracts:
 *
 *   trajectory.csv  k, t_s, rx_m, ry_m, rz_m, vx_mps, vy_mps, vz_mps,
 *                   ux_mps, uy_mps, uz_mps, sigma_s
 *                   (burn and dilation cells are empty on the final node)
 *   shooting.csv    t_s, rx_m, ry_m, rz_m, vx_mps, vy_mps, vz_mps, speed_mps
 *   iterations.jsonl  one ScpIterationRecord object per line
 *   samples.csv     index, rx0_m, ry0_m, rz0_m, status, scp_iters,
 *                   term_pos_err_m, term_vel_err_mps, tf_s, solve_time_s, error
 *
 * Numbers are written with 17 significant digits so that files round-trip.
 */

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pipgscp/config.hpp"
#include "pipgscp/verify.hpp"

namespace pipgscp {

std::string version();

inline const std::vector<std::string> kTrajectoryColumns = {
    "k",      "t_s",    "rx_m",   "ry_m",   "rz_m",   "vx_mps",
    "vy_mps", "vz_mps", "ux_mps", "uy_mps", "uz_mps", "sigma_s"};
inline const std::vector<std::string> kShootingColumns = {
    "t_s", "rx_m", "ry_m", "rz_m", "vx_mps", "vy_mps", "vz_mps", "speed_mps"};
inline const std::vector<std::string> kSampleColumns = {
    "index",          "rx0_m",            "ry0_m", "rz0_m",        "status", "scp_iters",
    "term_pos_err_m", "term_vel_err_mps", "tf_s",  "solve_time_s", "error"};

void write_trajectory_csv(const std::filesystem::path& path, const Solution& sol);
void write_shooting_csv(const std::filesystem::path& path, const ShootingReport& shoot);
void write_iterations_jsonl(const std::filesystem::path& path,
                            const std::vector<ScpIterationRecord>& records);
void write_samples_csv(const std::filesystem::path& path, const MonteCarloReport& report);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json to_json(const ScpIterationRecord& rec);
nlohmann::json to_json(const ShootingReport& shoot);
nlohmann::json to_json(const ConstraintAudit& audit);
/// Aggregate keys: n_samples, n_converged, n_failed, iters_mean, iters_std,
/// term_pos_err_mean_m, term_pos_err_std_m, term_vel_err_mean_mps,
/// term_vel_err_std_mps, tof_mean_s.
nlohmann::json to_json(const MonteCarloAggregate& agg);

/// Self-contained record of one solve: status, records, burn schedule,
/// shooting and audit results, the resolved config and the version.
nlohmann::json solve_summary(const RunConfig& cfg, const ScpResult& res, const Solution& sol,
                             const ShootingReport& shoot, const ConstraintAudit& audit);

}  // namespace pipgscp
