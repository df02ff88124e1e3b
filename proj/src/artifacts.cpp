#include "pipgscp/artifacts.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

#ifndef PIPGSCP_VERSION
#define PIPGSCP_VERSION "unknown"
#endif

namespace pipgscp {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << std::setprecision(17);
  return out;
}

void header(std::ostream& out, const std::vector<std::string>& cols)
{
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
}

json vec_json(const Eigen::Ref<const VecX>& v)
{
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

// CSV cell for a free-form message: quoted, inner quotes doubled.
std::string quoted(const std::string& s)
{
  std::string out = "\"";
  for (char c : s) {
    out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

}  // namespace

std::string version()
{
  return PIPGSCP_VERSION;
}

void write_trajectory_csv(const std::filesystem::path& path, const Solution& sol)
{
  auto out = open_out(path);
  header(out, kTrajectoryColumns);
  for (std::size_t k = 0; k < sol.states.size(); ++k) {
    const Vec6 x = sol.states[k].stacked();
    out << k << ',' << sol.node_times[k];
    for (int i = 0; i < 6; ++i) {
      out << ',' << x[i];
    }
    if (k < sol.burns.size()) {
      const Vec3& u = sol.burns[k].dv;
      out << ',' << u[0] << ',' << u[1] << ',' << u[2] << ',' << sol.dilations[k];
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

void write_shooting_csv(const std::filesystem::path& path, const ShootingReport& shoot)
{
  auto out = open_out(path);
  header(out, kShootingColumns);
  for (const auto& s : shoot.samples) {
    out << s.t;
    for (int i = 0; i < 6; ++i) {
      out << ',' << s.x[i];
    }
    out << ',' << s.x.tail<3>().norm() << '\n';
  }
}

void write_iterations_jsonl(const std::filesystem::path& path,
                            const std::vector<ScpIterationRecord>& records)
{
  auto out = open_out(path);
  for (const auto& r : records) {
    out << to_json(r).dump() << '\n';
  }
}

void write_samples_csv(const std::filesystem::path& path, const MonteCarloReport& report)
{
  auto out = open_out(path);
  header(out, kSampleColumns);
  for (const auto& s : report.samples) {
    out << s.index << ',' << s.r_init[0] << ',' << s.r_init[1] << ',' << s.r_init[2] << ','
        << to_string(s.outcome) << ',' << s.iterations << ',' << s.terminal_position_error << ','
        << s.terminal_velocity_error << ',' << s.time_of_flight << ',' << s.solve_time_s << ','
        << (s.error.empty() ? std::string() : quoted(s.error)) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& doc)
{
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

json to_json(const ScpIterationRecord& rec)
{
  return {
      {"iteration", rec.iteration},
      {"trust_region_radius", rec.trust_region_radius},
      {"vc_norm1", rec.vc_norm1},
      {"vb_norm1", rec.vb_norm1},
      {"vc_norm1_physical", rec.vc_norm1_physical},
      {"vb_norm1_physical", rec.vb_norm1_physical},
      {"objective", rec.objective},
      {"pipg_eq_residual", rec.pipg_eq_residual},
      {"wall_time_s", rec.wall_time_s},
  };
}

json to_json(const ShootingReport& shoot)
{
  return {
      {"terminal_position_error_m", shoot.terminal_position_error},
      {"terminal_velocity_error_mps", shoot.terminal_velocity_error},
      {"node_position_defects_m", shoot.node_position_defects},
      {"node_velocity_defects_mps", shoot.node_velocity_defects},
      {"terminal_state", vec_json(shoot.terminal_state)},
  };
}

json to_json(const ConstraintAudit& a)
{
  json doc = {
      {"burn_excess_mps", a.burn_excess},
      {"speed_excess_mps", a.speed_excess},
      {"keepout_intrusion_m", a.keepout_intrusion},
      {"dilation_excess_s", a.dilation_excess},
      {"boundary_error", a.boundary_error},
      {"min_keepout_distance_m", a.min_keepout_distance},
      {"max_scaled_violation", a.max_scaled_violation},
  };
  if (a.has_intersample) {
    doc["intersample"] = {
        {"max_speed_mps", a.intersample_max_speed},
        {"speed_excess_mps", a.intersample_speed_excess},
        {"min_keepout_distance_m", a.intersample_min_keepout_distance},
        {"keepout_intrusion_m", a.intersample_keepout_intrusion},
    };
  }
  return doc;
}

json to_json(const MonteCarloAggregate& agg)
{
  return {
      {"n_samples", agg.n_samples},
      {"n_converged", agg.n_converged},
      {"n_failed", agg.n_failed},
      {"iters_mean", agg.iters_mean},
      {"iters_std", agg.iters_std},
      {"term_pos_err_mean_m", agg.term_pos_err_mean_m},
      {"term_pos_err_std_m", agg.term_pos_err_std_m},
      {"term_vel_err_mean_mps", agg.term_vel_err_mean_mps},
      {"term_vel_err_std_mps", agg.term_vel_err_std_mps},
      {"tof_mean_s", agg.tof_mean_s},
  };
}

json solve_summary(const RunConfig& cfg, const ScpResult& res, const Solution& sol,
                   const ShootingReport& shoot, const ConstraintAudit& audit)
{
  json burns = json::array();
  for (const auto& b : sol.burns) {
    burns.push_back({{"t_s", b.time}, {"dv_mps", vec_json(b.dv)}, {"dv_norm_mps", b.dv.norm()}});
  }
  json records = json::array();
  for (const auto& r : res.records) {
    records.push_back(to_json(r));
  }
  return {
      {"version", version()},
      {"status", to_string(res.status)},
      {"scp_iterations", res.records.size()},
      {"time_of_flight_s", sol.time_of_flight},
      {"node_times_s", sol.node_times},
      {"dilations_s", sol.dilations},
      {"burns", burns},
      {"total_dv_mps",
       [&] {
         double s = 0.0;
         for (const auto& b : sol.burns) {
           s += b.dv.norm();
         }
         return s;
       }()},
      {"shooting", to_json(shoot)},
      {"audit", to_json(audit)},
      {"scaling",
       {{"state", vec_json(res.scaling.state)},
        {"control", vec_json(res.scaling.control)},
        {"dilation", res.scaling.dilation},
        {"buffer", res.scaling.buffer}}},
      {"records", records},
      {"config", to_json(cfg)},
  };
}

}  // namespace pipgscp
