#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhv/experiments.hpp"

#include <filesystem>
#include <fstream>

using namespace lhv;
using namespace lhv::experiments;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_static_config() {
  ExperimentConfig cfg;
  cfg.seed = 904;
  cfg.static_states = 3;
  cfg.static_settings = 4;
  cfg.integrator.mc_samples = 200000;
  cfg.integrator.mc_max_samples = 800000;
  cfg.integrator.tolerance = 2e-2;
  return cfg;
}

ExperimentConfig tiny_velocity_config() {
  ExperimentConfig cfg;
  cfg.seed = 905;
  cfg.degree_list = {1, 2};
  cfg.fit_random_states = 5;
  cfg.grid_n_theta = 4;
  cfg.grid_n_phi = 6;
  cfg.control_n_theta = 10;
  cfg.control_n_phi = 16;
  cfg.control_samples = 4;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("standard_ensemble: analytic families plus valid random noisy states") {
  const auto states = standard_ensemble(0.1, 0.2, 5, 42);
  REQUIRE(states.size() == 12); // mixed + 6 analytic + 5 random
  CHECK(states[0].T.norm() == 0.0);
  int analytic = 0;
  for (int i = 1; i <= 6; ++i) {
    const auto svd = quantum::singular_data(states[i].T);
    CHECK(svd.S[0] == doctest::Approx(0.1));
    CHECK(svd.S[1] + svd.S[2] < 1e-14);
    ++analytic;
  }
  CHECK(analytic == 6);
  for (const auto& s : states) CHECK(bell::validity(s));

  // Seed determinism.
  const auto again = standard_ensemble(0.1, 0.2, 5, 42);
  for (std::size_t i = 0; i < states.size(); ++i)
    CHECK((states[i].T - again[i].T).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("static sweep passes at loose tolerance and is worker-invariant") {
  ExperimentConfig cfg = tiny_static_config();
  const StaticSweepResult one = run_static_sweep(cfg);
  CHECK(one.pass);
  CHECK(one.rows.size() == std::size_t(one.states) * 4 * cfg.static_settings);
  CHECK(one.max_abs_err <= cfg.integrator.tolerance);

  cfg.workers = 3;
  const StaticSweepResult three = run_static_sweep(cfg);
  REQUIRE(three.rows.size() == one.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(three.rows[i].p_lhv == one.rows[i].p_lhv);
    CHECK(three.rows[i].p_quantum == one.rows[i].p_quantum);
  }
  CHECK(static_sweep_csv(three) == static_sweep_csv(one));
}

TEST_CASE("static sweep at zero visibility sits on the 1/4 baseline") {
  ExperimentConfig cfg = tiny_static_config();
  cfg.visibility = 0.0;
  cfg.include_analytic = false;
  const StaticSweepResult res = run_static_sweep(cfg);
  CHECK(res.pass);
  for (const auto& row : res.rows) {
    CHECK(row.p_quantum == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(row.p_lhv - 0.25) <= 5.0 * std::max(row.std_err, 1e-6));
  }
}

TEST_CASE("velocity experiment: empty state list is rejected") {
  ExperimentConfig cfg = tiny_velocity_config();
  cfg.include_analytic = false;
  cfg.fit_random_states = 0;
  CHECK_THROWS_AS(run_velocity_experiment(cfg), std::runtime_error);
}

TEST_CASE("velocity experiment: control solves, counterexample plateaus") {
  const auto res = run_velocity_experiment(tiny_velocity_config());
  REQUIRE(res.counterexample.size() == 2);
  CHECK(res.control[0].rel_residual < 1e-6);
  CHECK(res.control[1].rel_residual < 1e-6);
  CHECK(res.analytic_control_residual < 1e-8);
  CHECK(res.counterexample[0].rel_residual > 0.5);
  CHECK(res.counterexample[1].rel_residual >= res.plateau_threshold);
  CHECK(res.contrast_met);
  CHECK(res.chain.max_forced_norm <= 1e-6);
}

TEST_CASE("velocity experiment writes byte-identical outputs for a fixed seed") {
  const ExperimentConfig cfg = tiny_velocity_config();
  const auto raw = io::Config::parse_string("seed = 905\nreproducible = true\n");

  const fs::path base = fs::temp_directory_path() / "lhv_repro";
  fs::remove_all(base);
  for (const char* run : {"one", "two"}) {
    const auto res = run_velocity_experiment(cfg);
    OutputWriter writer(base / run, "fit-velocity", raw);
    writer.add_file("residual_vs_L.csv", residual_curve_csv(res));
    writer.add_file("feasibility.json", velocity_json(res, cfg));
    writer.commit();
  }
  for (const char* name : {"residual_vs_L.csv", "feasibility.json", "manifest.json"}) {
    const std::string a = slurp(base / "one" / name);
    const std::string b = slurp(base / "two" / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("covariance suite passes, and the corruption hook makes it fail") {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.l_max = 3;
  cfg.trials = 5;
  const auto good = run_covariance_suite(cfg);
  CHECK(good.pass);
  CHECK(good.identity_deviation == 0.0);
  CHECK(good.composition_max < 1e-8);
  CHECK(good.covariance_max < 1e-8);
  CHECK(good.smoothness_ratio == doctest::Approx(4.0).epsilon(0.5));

  cfg.corrupt_dmatrix = true;
  const auto bad = run_covariance_suite(cfg);
  CHECK_FALSE(bad.pass);
  CHECK(bad.composition_max > 1e-4);
}

TEST_CASE("derivatives csv carries the equations of motion") {
  std::vector<quantum::BlochTwoQubit> states(1);
  states[0].T = quantum::antisym_of_vec(Vec3::UnitZ());
  const std::string csv = derivatives_csv(states, 2.0);
  // adot = omega * z((T - T^T)/2) = 2 z.
  CHECK(csv.find("0,0,0,2,") != std::string::npos);
  CHECK(csv.rfind("state,", 0) == 0);
}

TEST_CASE("nogo csv includes exact big integers") {
  const auto rows = nogo::constraint_table({2}, {20}, 7);
  const std::string csv = nogo_table_csv(rows);
  CHECK(csv.find("2,20,7,16383,9870,0") != std::string::npos);
  CHECK(csv.find("2,20,6,4095,7260,1") != std::string::npos);
}
