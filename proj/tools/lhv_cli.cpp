// Command-line front end for the LHV dynamics experiments.
//
// Subcommands:
//   verify-static     LHV-vs-quantum static equivalence sweep
//   fit-velocity      continuity-equation feasibility fits (control + counterexample)
//   nogo-table        dimensionality-constraint table
//   covariance-check  universal-model group action and covariance suite
//   derivs            dump equations of motion for a state file
//
// Exit codes: 0 success, 1 criterion failure, 2 usage/config error.

#include "lhv/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

namespace {

using namespace lhv;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int workers = 0;
  bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key = value configuration file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "seed overriding the config");
  cmd->add_option("--workers", args.workers, "worker threads for parallel kernels");
  cmd->add_flag("--reproducible", args.reproducible, "pin deterministic reduction order");
}

// Loads the config file (if any), applies command-line overrides, resolves.
std::pair<experiments::ExperimentConfig, io::Config> load_config(const CommonArgs& args) {
  io::Config raw;
  if (!args.config_path.empty()) raw = io::Config::parse_file(args.config_path);
  if (args.seed >= 0) raw.set("seed", std::to_string(args.seed));
  if (args.workers > 0) raw.set("workers", std::to_string(args.workers));
  if (args.reproducible) raw.set("reproducible", "true");
  if (!args.out_dir.empty()) raw.set("out", args.out_dir);
  return {experiments::ExperimentConfig::from_config(raw), raw};
}

int cmd_verify_static(const CommonArgs& args) {
  auto [cfg, raw] = load_config(args);
  const auto result = experiments::run_static_sweep(cfg);

  experiments::OutputWriter writer(cfg.out_dir, "verify-static", raw);
  if (!args.config_path.empty()) writer.add_input(args.config_path, args.config_path);
  writer.add_file("static_errors.csv", experiments::static_sweep_csv(result));
  writer.add_file("summary.json", experiments::static_sweep_json(result, cfg));
  writer.commit();

  std::printf("verify-static: max |P_lhv - P_quantum| = %.3g over %zu comparisons (tolerance %g)\n",
              result.max_abs_err, result.rows.size(), cfg.integrator.tolerance);
  return result.pass ? 0 : 1;
}

int cmd_fit_velocity(const CommonArgs& args) {
  auto [cfg, raw] = load_config(args);
  const auto result = experiments::run_velocity_experiment(cfg);

  experiments::OutputWriter writer(cfg.out_dir, "fit-velocity", raw);
  if (!args.config_path.empty()) writer.add_input(args.config_path, args.config_path);
  if (cfg.states_file) writer.add_input(cfg.states_file->string(), *cfg.states_file);
  writer.add_file("residual_vs_L.csv", experiments::residual_curve_csv(result));
  writer.add_file("feasibility.json", experiments::velocity_json(result, cfg));
  writer.commit();

  for (std::size_t i = 0; i < result.counterexample.size(); ++i) {
    std::printf("L = %d: counterexample rel residual = %.4f, control = %.3g\n",
                result.counterexample[i].basis_degree, result.counterexample[i].rel_residual,
                result.control[i].rel_residual);
  }
  std::printf("fit-velocity: contrast criterion %s (plateau threshold %.4f)\n",
              result.contrast_met ? "met" : "NOT met", result.plateau_threshold);
  return result.contrast_met ? 0 : 1;
}

int cmd_nogo_table(const CommonArgs& args, const std::string& qudit_dims,
                   const std::string& hidden_dims) {
  auto [cfg, raw] = load_config(args);
  if (!qudit_dims.empty() || !hidden_dims.empty()) {
    if (!qudit_dims.empty()) raw.set("nogo_D", qudit_dims);
    if (!hidden_dims.empty()) raw.set("nogo_d", hidden_dims);
    cfg = experiments::ExperimentConfig::from_config(raw);
  }
  const auto rows = nogo::constraint_table(cfg.nogo_qudit_dims, cfg.nogo_hidden_dims, cfg.nogo_n_max);

  experiments::OutputWriter writer(cfg.out_dir, "nogo-table", raw);
  if (!args.config_path.empty()) writer.add_input(args.config_path, args.config_path);
  writer.add_file("nogo_table.csv", experiments::nogo_table_csv(rows));
  writer.add_file("nogo_summary.json", experiments::nogo_summary_json(cfg));
  writer.commit();

  for (int dq : cfg.nogo_qudit_dims)
    for (int dh : cfg.nogo_hidden_dims)
      std::printf("D = %d, d = %d: max particles with possible dynamics = %d\n", dq, dh,
                  nogo::max_particles(dq, dh));
  return 0;
}

int cmd_covariance_check(const CommonArgs& args) {
  auto [cfg, raw] = load_config(args);
  const auto result = experiments::run_covariance_suite(cfg);

  experiments::OutputWriter writer(cfg.out_dir, "covariance-check", raw);
  if (!args.config_path.empty()) writer.add_input(args.config_path, args.config_path);
  writer.add_file("covariance.json", experiments::covariance_json(result, cfg));
  const universal::BasisSpec spec{cfg.l_max};
  auto eng = rng::make_engine(cfg.seed);
  writer.add_file("dmatrix_sample.csv",
                  experiments::dmatrix_csv(universal::d_matrix(rng::haar_su2(eng), spec)));
  writer.add_file("basis_manifest.json", experiments::basis_manifest_json(spec));
  writer.commit();

  std::printf("covariance-check: composition %.2e, covariance %.2e, blocks %.2e -> %s\n",
              result.composition_max, result.covariance_max, result.block_orthogonality_max,
              result.pass ? "pass" : "FAIL");
  return result.pass ? 0 : 1;
}

int cmd_derivs(const CommonArgs& args, const std::string& states_path) {
  auto [cfg, raw] = load_config(args);
  const auto states = io::read_states(states_path);

  experiments::OutputWriter writer(cfg.out_dir, "derivs", raw);
  if (!args.config_path.empty()) writer.add_input(args.config_path, args.config_path);
  writer.add_input(states_path, states_path);
  writer.add_file("derivatives.csv", experiments::derivatives_csv(states, cfg.omega));
  writer.commit();

  std::printf("derivs: wrote equations of motion for %zu states (omega = %g)\n", states.size(),
              cfg.omega);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for local hidden-variable dynamics"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string states_path;

  auto* verify = app.add_subcommand("verify-static", "LHV vs quantum static equivalence sweep");
  add_common(verify, args);
  auto* fit = app.add_subcommand("fit-velocity", "continuity-equation feasibility fits");
  add_common(fit, args);
  auto* nogo_cmd = app.add_subcommand("nogo-table", "dimensionality-constraint table");
  add_common(nogo_cmd, args);
  std::string qudit_dims, hidden_dims;
  nogo_cmd->add_option("--D", qudit_dims, "comma-separated qudit dimensions");
  nogo_cmd->add_option("--d", hidden_dims, "comma-separated hidden-variable dimensions");
  auto* cov = app.add_subcommand("covariance-check", "universal-model property suite");
  add_common(cov, args);
  auto* derivs = app.add_subcommand("derivs", "dump equations of motion for a state file");
  add_common(derivs, args);
  derivs->add_option("states", states_path, "plain-text state records")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify_static(args);
    if (fit->parsed()) return cmd_fit_velocity(args);
    if (nogo_cmd->parsed()) return cmd_nogo_table(args, qudit_dims, hidden_dims);
    if (cov->parsed()) return cmd_covariance_check(args);
    if (derivs->parsed()) return cmd_derivs(args, states_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
