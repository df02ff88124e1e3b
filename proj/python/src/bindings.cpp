#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pipgscp/artifacts.hpp"
#include "pipgscp/config.hpp"
#include "pipgscp/verify.hpp"

namespace py = pybind11;
using namespace pipgscp;

namespace {

MatX stack_states(const std::vector<State>& states)
{
  MatX m(static_cast<Index>(states.size()), 6);
  for (std::size_t k = 0; k < states.size(); ++k) {
    m.row(static_cast<Index>(k)) = states[k].stacked().transpose();
  }
  return m;
}

MatX stack_burns(const std::vector<Burn>& burns)
{
  MatX m(static_cast<Index>(burns.size()), 3);
  for (std::size_t k = 0; k < burns.size(); ++k) {
    m.row(static_cast<Index>(k)) = burns[k].dv.transpose();
  }
  return m;
}

MatX stack_samples(const ShootingReport& shoot)
{
  MatX m(static_cast<Index>(shoot.samples.size()), 7);
  for (std::size_t i = 0; i < shoot.samples.size(); ++i) {
    m(static_cast<Index>(i), 0) = shoot.samples[i].t;
    m.row(static_cast<Index>(i)).tail<6>() = shoot.samples[i].x.transpose();
  }
  return m;
}

py::dict solution_dict(const Solution& sol)
{
  py::dict d;
  d["states"] = stack_states(sol.states);
  d["burns"] = stack_burns(sol.burns);
  d["node_times"] = sol.node_times;
  d["dilations"] = sol.dilations;
  d["time_of_flight"] = sol.time_of_flight;
  return d;
}

py::dict shooting_dict(const ShootingReport& shoot)
{
  py::dict d;
  d["terminal_position_error"] = shoot.terminal_position_error;
  d["terminal_velocity_error"] = shoot.terminal_velocity_error;
  d["node_position_defects"] = shoot.node_position_defects;
  d["node_velocity_defects"] = shoot.node_velocity_defects;
  d["samples"] = stack_samples(shoot);
  return d;
}

py::dict solve(const ProblemSpec& spec, const ScpConfig& config)
{
  ScpResult res;
  {
    py::gil_scoped_release release;
    res = scp_solve(spec, config);
  }
  const Solution sol = extract_solution(res.trajectory, res.grid);
  const ShootingReport shoot = single_shoot(spec, sol);
  const ConstraintAudit audit = audit_constraints(spec, sol, res.scaling, &shoot);

  py::list records;
  for (const auto& r : res.records) {
    records.append(py::module_::import("json").attr("loads")(to_json(r).dump()));
  }
  py::dict d;
  d["status"] = to_string(res.status);
  d["records"] = records;
  d["solution"] = solution_dict(sol);
  d["shooting"] = shooting_dict(shoot);
  d["min_keepout_distance"] = audit.min_keepout_distance;
  d["max_scaled_violation"] = audit.max_scaled_violation;
  return d;
}

py::dict run_monte_carlo(const MonteCarloConfig& cfg)
{
  MonteCarloReport rep;
  {
    py::gil_scoped_release release;
    rep = monte_carlo(cfg);
  }
  py::list samples;
  for (const auto& s : rep.samples) {
    py::dict d;
    d["index"] = s.index;
    d["r_init"] = Vec3(s.r_init);
    d["status"] = to_string(s.outcome);
    d["iterations"] = s.iterations;
    d["terminal_position_error"] = s.terminal_position_error;
    d["terminal_velocity_error"] = s.terminal_velocity_error;
    d["time_of_flight"] = s.time_of_flight;
    d["error"] = s.error;
    samples.append(d);
  }
  py::dict d;
  d["samples"] = samples;
  d["aggregate"] = py::module_::import("json").attr("loads")(to_json(rep.aggregate).dump());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Impulsive rendezvous trajectory optimization with SCP and PIPG";
  m.attr("__version__") = version();

  py::class_<CwParams>(m, "CwParams")
      .def(py::init<>())
      .def_readwrite("mean_motion", &CwParams::mean_motion);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init<>())
      .def_readwrite("cw", &ProblemSpec::cw)
      .def_readwrite("r_init", &ProblemSpec::r_init)
      .def_readwrite("v_init", &ProblemSpec::v_init)
      .def_readwrite("v_max", &ProblemSpec::v_max)
      .def_readwrite("u_max", &ProblemSpec::u_max)
      .def_readwrite("r_keepout", &ProblemSpec::r_keepout)
      .def_readwrite("rho_keepout", &ProblemSpec::rho_keepout)
      .def_readwrite("sigma_min", &ProblemSpec::sigma_min)
      .def_readwrite("sigma_max", &ProblemSpec::sigma_max)
      .def("validate", &ProblemSpec::validate);

  py::class_<SubproblemWeights>(m, "SubproblemWeights")
      .def(py::init<>())
      .def_readwrite("trust_region", &SubproblemWeights::trust_region)
      .def_readwrite("virtual_control", &SubproblemWeights::virtual_control)
      .def_readwrite("virtual_buffer", &SubproblemWeights::virtual_buffer);

  py::class_<pipg::SolverSettings>(m, "SolverSettings")
      .def(py::init<>())
      .def_readwrite("rho", &pipg::SolverSettings::rho)
      .def_readwrite("omega", &pipg::SolverSettings::omega)
      .def_readwrite("k_max", &pipg::SolverSettings::k_max);

  py::enum_<GridKind>(m, "GridKind")
      .value("UnitIntervals", GridKind::UnitIntervals)
      .value("Normalized", GridKind::Normalized);

  py::class_<ScpConfig>(m, "ScpConfig")
      .def(py::init<>())
      .def_readwrite("nodes", &ScpConfig::nodes)
      .def_readwrite("weights", &ScpConfig::weights)
      .def_readwrite("pipg", &ScpConfig::pipg)
      .def_readwrite("eps_trust_region", &ScpConfig::eps_trust_region)
      .def_readwrite("eps_virtual_control", &ScpConfig::eps_virtual_control)
      .def_readwrite("eps_virtual_buffer", &ScpConfig::eps_virtual_buffer)
      .def_readwrite("max_iterations", &ScpConfig::max_iterations)
      .def_readwrite("substeps", &ScpConfig::substeps)
      .def_readwrite("time_grid", &ScpConfig::time_grid);

  py::class_<MonteCarloConfig>(m, "MonteCarloConfig")
      .def(py::init<>())
      .def_readwrite("n_samples", &MonteCarloConfig::n_samples)
      .def_readwrite("position_std", &MonteCarloConfig::position_std)
      .def_readwrite("seed", &MonteCarloConfig::seed)
      .def_readwrite("spec", &MonteCarloConfig::spec)
      .def_readwrite("scp", &MonteCarloConfig::scp)
      .def_readwrite("workers", &MonteCarloConfig::workers);

  m.def("solve", &solve, py::arg("spec") = ProblemSpec{}, py::arg("config") = ScpConfig{},
        "Run SCP, then verify the result by single shooting.");
  m.def("monte_carlo", &run_monte_carlo, py::arg("config") = MonteCarloConfig{},
        "Run the initial-position dispersion campaign.");
  m.def(
      "load_config",
      [](const std::string& path, const std::vector<std::string>& overrides) {
        const RunConfig cfg = load_config(path, overrides);
        return py::make_tuple(cfg.problem, cfg.scp, cfg.montecarlo_config());
      },
      py::arg("path") = std::string(), py::arg("overrides") = std::vector<std::string>{},
      "Parse a JSON run config; returns (ProblemSpec, ScpConfig, MonteCarloConfig).");
  m.def(
      "sample_initial_position",
      [](const Vec3& mean, double std_dev, std::uint64_t seed, int index) {
        return sample_initial_position(mean, std_dev, seed, index);
      },
      py::arg("mean"), py::arg("std_dev"), py::arg("seed"), py::arg("index"));

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SingularLinearizationError>(m, "SingularLinearizationError",
                                                     PyExc_RuntimeError);
}
