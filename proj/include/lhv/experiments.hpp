#pragma once

#include "lhv/bell.hpp"
#include "lhv/dynamics.hpp"
#include "lhv/io.hpp"
#include "lhv/nogo.hpp"
#include "lhv/universal.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lhv::experiments {

// Resolved settings for all experiment commands. Everything stochastic is
// derived from `seed`; `reproducible` additionally pins the worker reduction
// order (the kernels are deterministic either way).
struct ExperimentConfig {
  std::uint64_t seed = 20240915;
  int workers = 1;
  bool reproducible = false;
  std::filesystem::path out_dir = "out";

  // state ensembles
  double visibility = 0.2;
  double epsilon = 0.1;
  bool include_analytic = true;

  // static equivalence sweep
  int static_states = 100;
  int static_settings = 20;
  bell::IntegratorConfig integrator;

  // velocity feasibility
  double omega = 1.0;
  std::vector<int> degree_list = {2, 4, 6, 8};
  int fit_random_states = 32;
  int grid_n_theta = 8;
  int grid_n_phi = 12;
  int control_n_theta = 16;
  int control_n_phi = 32;
  int control_samples = 12;
  double kink_radius = 1e-3;
  double dt = 1e-5;
  std::string basis_truncation = "total"; // or "tensor"
  std::optional<std::filesystem::path> states_file;

  // no-go table
  std::vector<int> nogo_qudit_dims = {2, 3};
  std::vector<int> nogo_hidden_dims = {2, 20};
  int nogo_n_max = 8;

  // covariance suite
  int l_max = 5;
  int trials = 100;
  bool corrupt_dmatrix = false; // test hook: deliberately break one entry

  // Loads keys from a flat config; throws on unknown or malformed keys.
  static ExperimentConfig from_config(const io::Config& cfg);

  dynamics::FeasibilityOptions feasibility_options() const;
};

// Six analytic families T = +-eps u u^T (u in {x, y, z}), the maximally mixed
// state, then `random_count` samples of S_v.
std::vector<quantum::BlochTwoQubit> standard_ensemble(double epsilon, double visibility,
                                                      int random_count, std::uint64_t seed,
                                                      bool include_analytic = true);

// Bloch samples for the single-qubit control problem: r = 0, the three axes at
// norm 0.6, plus random directions with norms in [0.2, 0.9].
std::vector<Vec3> control_samples(int random_count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// verify-static
// ---------------------------------------------------------------------------

struct StaticSweepRow {
  int state;
  int setting;
  bell::SettingPair dirs;
  int outcome1, outcome2; // 0 = up, 1 = down
  double p_lhv, p_quantum, abs_err, std_err;
};

struct StaticSweepResult {
  std::vector<StaticSweepRow> rows;
  double max_abs_err = 0.0;
  double mean_abs_err = 0.0;
  std::size_t max_samples_used = 0;
  int states = 0;
  int settings_per_state = 0;
  bool converged = true;
  bool pass = false;
};

StaticSweepResult run_static_sweep(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// fit-velocity
// ---------------------------------------------------------------------------

struct VelocityExperimentResult {
  std::vector<dynamics::FeasibilityReport> counterexample; // one per degree
  std::vector<dynamics::FeasibilityReport> control;        // one per degree
  dynamics::ChainCheckReport chain;                        // on the largest-degree fit
  double analytic_control_residual = 0.0;                  // substituted omega z x lambda
  double plateau_threshold = 0.0;                          // 0.5 * rel residual at L = degree_list[0]
  bool plateau_met = false;
  bool control_met = false;
  bool contrast_met = false;
};

VelocityExperimentResult run_velocity_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// covariance-check
// ---------------------------------------------------------------------------

struct CovarianceSuiteResult {
  double identity_deviation = 0.0;
  double composition_max = 0.0;
  double covariance_max = 0.0;
  double group_action_max = 0.0;
  double block_orthogonality_max = 0.0;
  double off_block_max = 0.0;
  double smoothness_ratio = 0.0; // finite-difference convergence ratio, ~4 expected
  bool pass = false;
};

CovarianceSuiteResult run_covariance_suite(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Report files. Every command writes its artifacts plus manifest.json with a
// config echo and SHA-256 hashes of inputs and outputs.
// ---------------------------------------------------------------------------

class OutputWriter {
 public:
  OutputWriter(std::filesystem::path dir, std::string command, const io::Config& config_echo);

  void add_file(const std::string& name, const std::string& bytes);
  void add_input(const std::string& label, const std::filesystem::path& path);

  // Writes all files plus the manifest; returns the manifest path.
  std::filesystem::path commit();

 private:
  std::filesystem::path dir_;
  std::string command_;
  io::Config echo_;
  std::map<std::string, std::string> files_;
  std::map<std::string, std::string> input_hashes_;
};

// Serialization helpers used by the CLI and the acceptance suite.
std::string static_sweep_csv(const StaticSweepResult& r);
std::string static_sweep_json(const StaticSweepResult& r, const ExperimentConfig& cfg);
std::string residual_curve_csv(const VelocityExperimentResult& r);
std::string velocity_json(const VelocityExperimentResult& r, const ExperimentConfig& cfg);
std::string nogo_table_csv(const std::vector<nogo::ConstraintRow>& rows);
std::string nogo_summary_json(const ExperimentConfig& cfg);
std::string covariance_json(const CovarianceSuiteResult& r, const ExperimentConfig& cfg);
std::string dmatrix_csv(const universal::DMatrix& d);
std::string basis_manifest_json(const universal::BasisSpec& spec);
std::string derivatives_csv(const std::vector<quantum::BlochTwoQubit>& states, double omega);

} // namespace lhv::experiments
