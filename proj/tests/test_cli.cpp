#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "pipgscp/config.hpp"

namespace fs = std::filesystem;
using namespace pipgscp;
using nlohmann::json;

namespace {

struct Outcome
{
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p)
{
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> split(const std::string& s)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(s);
  while (std::getline(ss, cell, ',')) {
    out.push_back(cell);
  }
  if (!s.empty() && s.back() == ',') {
    out.emplace_back();
  }
  return out;
}

fs::path write_config(const fs::path& dir, const json& doc)
{
  const fs::path p = dir / "cfg.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

}  // namespace

TEST_CASE("default config round-trips through JSON")
{
  const RunConfig def;
  const RunConfig back = config_from_json(to_json(def));
  CHECK(back.problem.r_init == def.problem.r_init);
  CHECK(back.problem.cw.mean_motion == def.problem.cw.mean_motion);
  CHECK(back.scp.nodes == 15);
  CHECK(back.scp.weights.virtual_control == 13.0);
  CHECK(back.scp.pipg.omega == 375.0);
  CHECK(back.scp.pipg.k_max == 100);
  CHECK(back.montecarlo.n_samples == 128);
  CHECK(to_json(back) == to_json(def));
  CHECK(config_from_json(json::object()).scp.max_iterations == def.scp.max_iterations);
}

TEST_CASE("config errors name the offending key")
{
  try {
    config_from_json(json{{"scp", {{"bogus", 1}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("scp.bogus") != std::string::npos);
  }
  try {
    config_from_json(json{{"problem", {{"v_max", "fast"}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("problem.v_max") != std::string::npos);
  }
  CHECK_THROWS_AS(config_from_json(json{{"extra", {}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"scp", {{"time_grid", "weekly"}}}}), ConfigError);
}

TEST_CASE("overrides parse JSON values and fall back to strings")
{
  json doc = json::object();
  apply_override(doc, "scp.k_max=250");
  apply_override(doc, "problem.r_init=[1, 2, 3]");
  apply_override(doc, "io.out_dir=runs/a");
  CHECK(doc["scp"]["k_max"] == 250);
  CHECK(doc["problem"]["r_init"] == json::array({1, 2, 3}));
  CHECK(doc["io"]["out_dir"] == "runs/a");
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
}

TEST_CASE("solve with defaults writes the documented artifacts")
{
  const fs::path dir = scratch("solve");
  const Outcome o = run({"solve", "--out", dir.string()});
  REQUIRE(o.code == cli::kExitConverged);
  for (const char* f : {"trajectory.csv", "shooting.csv", "iterations.jsonl", "config.json", "summary.json"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }

  const auto traj = lines(dir / "trajectory.csv");
  REQUIRE(traj.size() == 16);
  CHECK(traj[0] == "k,t_s,rx_m,ry_m,rz_m,vx_mps,vy_mps,vz_mps,ux_mps,uy_mps,uz_mps,sigma_s");
  const auto last = split(traj.back());
  REQUIRE(last.size() == 12);
  for (std::size_t c = 8; c < 12; ++c) {
    CHECK(last[c].empty());
  }
  CHECK_FALSE(split(traj[1])[11].empty());

  CHECK(lines(dir / "shooting.csv")[0] == "t_s,rx_m,ry_m,rz_m,vx_mps,vy_mps,vz_mps,speed_mps");

  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["status"] == "converged");
  const double tf = summary["time_of_flight_s"];
  CHECK(tf >= 14 * 100.0);
  CHECK(tf <= 14 * 300.0);
  CHECK(summary.contains("version"));
  const int iters = summary["scp_iterations"];
  const auto log = lines(dir / "iterations.jsonl");
  CHECK(static_cast<int>(log.size()) == iters);
  const json rec = json::parse(log.front());
  for (const char* k : {"iteration", "trust_region_radius", "vc_norm1", "vb_norm1", "objective",
                        "pipg_eq_residual", "wall_time_s"}) {
    CAPTURE(k);
    CHECK(rec.contains(k));
  }
}

TEST_CASE("rerunning the echoed config reproduces the trajectory bitwise")
{
  const fs::path a = scratch("echo_a");
  const fs::path b = scratch("echo_b");
  REQUIRE(run({"solve", "--out", a.string()}).code == 0);
  REQUIRE(run({"solve", (a / "config.json").string(), "--out", b.string()}).code == 0);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "shooting.csv") == slurp(b / "shooting.csv"));
}

TEST_CASE("an iteration cap of one exits with the not-converged code")
{
  const fs::path dir = scratch("cap");
  const Outcome o = run({"solve", "--set", "scp.max_scp_iters=1", "--out", dir.string()});
  CHECK(o.code == cli::kExitNotConverged);
  CHECK(json::parse(slurp(dir / "summary.json"))["status"] == "max_iters");
}

TEST_CASE("a missing config file is an error naming the path")
{
  const Outcome o = run({"solve", "does/not/exist.json"});
  CHECK(o.code == cli::kExitError);
  CHECK(o.err.find("does/not/exist.json") != std::string::npos);
}

TEST_CASE("check accepts the defaults and rejects infeasible boundary data")
{
  const Outcome ok = run({"check"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("config ok") != std::string::npos);

  const Outcome inside = run({"check", "--set", "problem.r_init=[0, 300, 50]"});
  CHECK(inside.code == cli::kExitError);
  CHECK(inside.err.find("keepout") != std::string::npos);

  const Outcome fast = run({"check", "--set", "problem.v_init=[0.6, 0, 0]"});
  CHECK(fast.code == cli::kExitError);
  CHECK(fast.err.find("v_max") != std::string::npos);

  const fs::path dir = scratch("bad_key");
  const Outcome bad = run({"check", write_config(dir, json{{"scp", {{"nodez", 15}}}}).string()});
  CHECK(bad.code == cli::kExitError);
  CHECK(bad.err.find("scp.nodez") != std::string::npos);
}

TEST_CASE("a four-sample campaign is deterministic and writes its tables")
{
  const fs::path a = scratch("mc_a");
  const fs::path b = scratch("mc_b");
  const fs::path c = scratch("mc_c");
  REQUIRE(run({"montecarlo", "--set", "montecarlo.n_samples=4", "--workers", "2", "--out", a.string()}).code == 0);
  REQUIRE(run({"montecarlo", "--set", "montecarlo.n_samples=4", "--workers", "1", "--out", b.string()}).code == 0);
  REQUIRE(run({"montecarlo", "--set", "montecarlo.n_samples=4", "--seed", "7", "--out", c.string()}).code == 0);

  const auto rows_a = lines(a / "samples.csv");
  const auto rows_b = lines(b / "samples.csv");
  const auto rows_c = lines(c / "samples.csv");
  REQUIRE(rows_a.size() == 5);
  CHECK(rows_a[0] ==
        "index,rx0_m,ry0_m,rz0_m,status,scp_iters,term_pos_err_m,term_vel_err_mps,tf_s,solve_time_s,error");
  CHECK(rows_c[0] == rows_a[0]);
  for (std::size_t i = 1; i < rows_a.size(); ++i) {
    auto ca = split(rows_a[i]);
    auto cb = split(rows_b[i]);
    REQUIRE(ca.size() == 11);
    // wall time is the one column allowed to differ
    ca[9].clear();
    cb[9].clear();
    CHECK(ca == cb);
    CHECK(split(rows_c[i])[1] != ca[1]);
  }

  const json agg = json::parse(slurp(a / "aggregate.json"));
  for (const char* k : {"n_samples", "n_converged", "iters_mean", "iters_std", "term_pos_err_mean_m",
                        "term_pos_err_std_m", "term_vel_err_mean_mps"}) {
    CAPTURE(k);
    CHECK(agg.contains(k));
  }
  CHECK(agg["n_samples"] == 4);
  CHECK(fs::exists(a / "samples" / "sample_0000_trajectory.csv"));
  CHECK(fs::exists(a / "samples" / "sample_0003_shooting.csv"));
}

TEST_CASE("unknown subcommands and flags are errors")
{
  CHECK(run({"fly"}).code == cli::kExitError);
  CHECK(run({"solve", "--bogus"}).code == cli::kExitError);
  CHECK(run({}).code == cli::kExitError);
}
