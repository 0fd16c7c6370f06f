#include "lhv/experiments.hpp"

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace lhv::experiments {

using json = nlohmann::ordered_json;

namespace {

constexpr double kControlResidualMax = 1e-6;
constexpr double kAnalyticFieldResidualMax = 1e-8;
constexpr double kPlateauFactor = 0.5;

} // namespace

ExperimentConfig ExperimentConfig::from_config(const io::Config& cfg) {
  ExperimentConfig out;
  out.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<std::int64_t>(out.seed)));
  out.workers = static_cast<int>(cfg.get_int("workers", out.workers));
  out.reproducible = cfg.get_bool("reproducible", out.reproducible);
  out.out_dir = cfg.get_string("out", out.out_dir.string());

  out.visibility = cfg.get_double("visibility", out.visibility);
  out.epsilon = cfg.get_double("epsilon", out.epsilon);
  out.include_analytic = cfg.get_bool("include_analytic", out.include_analytic);

  out.static_states = static_cast<int>(cfg.get_int("static_states", out.static_states));
  out.static_settings = static_cast<int>(cfg.get_int("static_settings", out.static_settings));
  const std::string mode = cfg.get_string("integrator", "mc");
  if (mode == "mc") {
    out.integrator.mode = bell::IntegratorMode::MonteCarlo;
  } else if (mode == "quadrature") {
    out.integrator.mode = bell::IntegratorMode::ProductQuadrature;
  } else {
    throw std::runtime_error("config: integrator must be 'mc' or 'quadrature'");
  }
  out.integrator.mc_samples =
      static_cast<std::size_t>(cfg.get_int("mc_samples", std::int64_t(out.integrator.mc_samples)));
  out.integrator.mc_max_samples = static_cast<std::size_t>(
      cfg.get_int("mc_max_samples", std::int64_t(out.integrator.mc_max_samples)));
  out.integrator.quad_n_theta =
      static_cast<int>(cfg.get_int("quad_n_theta", out.integrator.quad_n_theta));
  out.integrator.quad_n_phi =
      static_cast<int>(cfg.get_int("quad_n_phi", out.integrator.quad_n_phi));
  out.integrator.tolerance = cfg.get_double("tolerance", out.integrator.tolerance);

  out.omega = cfg.get_double("omega", out.omega);
  out.degree_list = cfg.get_int_list("L_list", out.degree_list);
  out.fit_random_states = static_cast<int>(cfg.get_int("fit_random_states", out.fit_random_states));
  out.grid_n_theta = static_cast<int>(cfg.get_int("grid_n_theta", out.grid_n_theta));
  out.grid_n_phi = static_cast<int>(cfg.get_int("grid_n_phi", out.grid_n_phi));
  out.control_n_theta = static_cast<int>(cfg.get_int("control_n_theta", out.control_n_theta));
  out.control_n_phi = static_cast<int>(cfg.get_int("control_n_phi", out.control_n_phi));
  out.control_samples = static_cast<int>(cfg.get_int("control_samples", out.control_samples));
  out.kink_radius = cfg.get_double("kink_radius", out.kink_radius);
  out.dt = cfg.get_double("dt", out.dt);
  out.basis_truncation = cfg.get_string("basis", out.basis_truncation);
  if (out.basis_truncation != "total" && out.basis_truncation != "tensor")
    throw std::runtime_error("config: basis must be 'total' or 'tensor'");
  const std::string states_file = cfg.get_string("states_file", "");
  if (!states_file.empty()) {
    if (!std::filesystem::exists(states_file))
      throw std::runtime_error("config: states_file does not exist: " + states_file);
    out.states_file = states_file;
  }

  out.nogo_qudit_dims = cfg.get_int_list("nogo_D", out.nogo_qudit_dims);
  out.nogo_hidden_dims = cfg.get_int_list("nogo_d", out.nogo_hidden_dims);
  out.nogo_n_max = static_cast<int>(cfg.get_int("nogo_n_max", out.nogo_n_max));

  out.l_max = static_cast<int>(cfg.get_int("lmax", out.l_max));
  out.trials = static_cast<int>(cfg.get_int("trials", out.trials));
  out.corrupt_dmatrix = cfg.get_bool("corrupt_dmatrix", out.corrupt_dmatrix);

  const auto unused = cfg.unused_keys();
  if (!unused.empty()) {
    std::string msg = "config: unknown key(s):";
    for (const auto& k : unused) msg += " " + k;
    throw std::runtime_error(msg);
  }
  if (out.workers < 1) throw std::runtime_error("config: workers must be >= 1");
  return out;
}

dynamics::FeasibilityOptions ExperimentConfig::feasibility_options() const {
  dynamics::FeasibilityOptions opt;
  opt.omega = omega;
  opt.dt = dt;
  opt.kink_radius = kink_radius;
  opt.n_theta = grid_n_theta;
  opt.n_phi = grid_n_phi;
  opt.truncation = basis_truncation == "tensor"
                       ? dynamics::ProductVelocityBasis::Truncation::TensorProduct
                       : dynamics::ProductVelocityBasis::Truncation::TotalDegree;
  return opt;
}

std::vector<quantum::BlochTwoQubit> standard_ensemble(double epsilon, double visibility,
                                                      int random_count, std::uint64_t seed,
                                                      bool include_analytic) {
  std::vector<quantum::BlochTwoQubit> out;
  if (include_analytic) {
    out.emplace_back(); // maximally mixed
    const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (const Vec3& u : axes)
      for (double sign : {1.0, -1.0}) {
        quantum::BlochTwoQubit s;
        s.T = sign * epsilon * u * u.transpose();
        out.push_back(s);
      }
  }
  for (int i = 0; i < random_count; ++i) {
    auto eng = rng::substream(seed, 1000 + std::uint64_t(i));
    out.push_back(quantum::sample_noisy_ball(visibility, eng));
  }
  return out;
}

std::vector<Vec3> control_samples(int random_count, std::uint64_t seed) {
  std::vector<Vec3> out;
  out.emplace_back(Vec3::Zero());
  out.emplace_back(0.6 * Vec3::UnitX());
  out.emplace_back(0.6 * Vec3::UnitY());
  out.emplace_back(0.6 * Vec3::UnitZ());
  for (int i = 0; i < random_count; ++i) {
    auto eng = rng::substream(seed, 2000 + std::uint64_t(i));
    const Vec3 dir = rng::unit_vector(eng);
    out.push_back((0.2 + 0.7 * rng::uniform(eng)) * dir);
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify-static
// ---------------------------------------------------------------------------

StaticSweepResult run_static_sweep(const ExperimentConfig& cfg) {
  const auto states = standard_ensemble(cfg.epsilon, cfg.visibility, cfg.static_states, cfg.seed,
                                        cfg.include_analytic);
  const std::size_t n = states.size();
  std::vector<std::vector<StaticSweepRow>> per_state(n);
  std::vector<std::size_t> samples_used(n, 0);
  std::vector<char> state_converged(n, 1);

  auto sweep_state = [&](std::size_t i) {
    auto eng = rng::substream(cfg.seed, 3000 + i);
    std::vector<bell::SettingPair> settings(cfg.static_settings);
    for (auto& sp : settings) {
      sp.n1 = rng::unit_vector(eng);
      sp.n2 = rng::unit_vector(eng);
    }
    bell::IntegratorConfig icfg = cfg.integrator;
    icfg.seed = rng::substream(cfg.seed, 4000 + i)();

    const bell::TwoQubitLhvDensity density(states[i]);
    const auto table = bell::lhv_joint_table(density, settings, icfg);

    std::vector<StaticSweepRow> rows;
    rows.reserve(settings.size() * 4);
    for (std::size_t k = 0; k < settings.size(); ++k) {
      const auto qrow = bell::quantum_joint_row(states[i], settings[k]);
      for (int o = 0; o < 4; ++o) {
        StaticSweepRow row;
        row.state = static_cast<int>(i);
        row.setting = static_cast<int>(k);
        row.dirs = settings[k];
        row.outcome1 = o / 2;
        row.outcome2 = o % 2;
        row.p_lhv = table[k][o].value;
        row.p_quantum = qrow[o];
        row.abs_err = std::abs(row.p_lhv - row.p_quantum);
        row.std_err = table[k][o].error;
        samples_used[i] = std::max(samples_used[i], table[k][o].evaluations);
        if (!table[k][o].converged) state_converged[i] = 0;
        rows.push_back(row);
      }
    }
    per_state[i] = std::move(rows);
  };

  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) sweep_state(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          sweep_state(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  StaticSweepResult res;
  res.states = static_cast<int>(n);
  res.settings_per_state = cfg.static_settings;
  double err_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    res.converged = res.converged && state_converged[i];
    res.max_samples_used = std::max(res.max_samples_used, samples_used[i]);
    for (const auto& row : per_state[i]) {
      res.max_abs_err = std::max(res.max_abs_err, row.abs_err);
      err_sum += row.abs_err;
      res.rows.push_back(row);
    }
  }
  res.mean_abs_err = res.rows.empty() ? 0.0 : err_sum / double(res.rows.size());
  res.pass = res.converged && res.max_abs_err <= cfg.integrator.tolerance;
  return res;
}

// ---------------------------------------------------------------------------
// fit-velocity
// ---------------------------------------------------------------------------

VelocityExperimentResult run_velocity_experiment(const ExperimentConfig& cfg) {
  std::vector<quantum::BlochTwoQubit> states;
  if (cfg.states_file) {
    states = io::read_states(*cfg.states_file);
  } else {
    states = standard_ensemble(cfg.epsilon, cfg.visibility, cfg.fit_random_states, cfg.seed,
                               cfg.include_analytic);
  }
  if (states.empty()) throw std::runtime_error("fit-velocity: empty state list");
  if (cfg.degree_list.empty()) throw std::runtime_error("fit-velocity: empty degree list");

  const auto opts = cfg.feasibility_options();
  const auto controls = control_samples(cfg.control_samples, cfg.seed);

  VelocityExperimentResult res;
  VecX best_coeffs;
  int best_degree = 0;
  std::optional<dynamics::FeasibilitySystem> best_system;

  for (int degree : cfg.degree_list) {
    std::optional<dynamics::FeasibilitySystem> system;
    system.emplace(states, degree, opts);
    auto fit = dynamics::fit_velocity_field(*system);
    res.counterexample.push_back(fit.report);
    if (degree >= best_degree) {
      best_degree = degree;
      best_coeffs = std::move(fit.coefficients);
      best_system = std::move(system);
    }

    res.control.push_back(dynamics::single_qubit_control(cfg.omega, controls, cfg.control_n_theta,
                                                         cfg.control_n_phi, degree,
                                                         cfg.kink_radius));
  }

  // Substituted analytic rotation field on the control node set.
  {
    dynamics::FeasibilityOptions copt = opts;
    copt.n_theta = cfg.control_n_theta;
    copt.n_phi = cfg.control_n_phi;
    dynamics::SingleQubitFeasibility control_problem(controls, cfg.degree_list.front(), copt);
    const double omega = cfg.omega;
    res.analytic_control_residual = control_problem.max_pointwise_residual(
        [omega](const Vec3& lambda) { return Vec3(omega * Vec3::UnitZ().cross(lambda)); });
  }

  // Chain check on the best-fit field over the largest-degree grid.
  res.chain = dynamics::analytic_chain_check(best_system->basis(), best_coeffs,
                                             best_system->grid(), cfg.kink_radius);

  res.plateau_threshold = kPlateauFactor * res.counterexample.front().rel_residual;
  res.plateau_met = true;
  for (std::size_t i = 1; i < res.counterexample.size(); ++i)
    res.plateau_met = res.plateau_met &&
                      res.counterexample[i].rel_residual >= res.plateau_threshold;
  res.control_met = res.analytic_control_residual <= kAnalyticFieldResidualMax;
  for (const auto& c : res.control)
    res.control_met = res.control_met && c.rel_residual <= kControlResidualMax;
  res.contrast_met = res.plateau_met && res.control_met;
  return res;
}

// ---------------------------------------------------------------------------
// covariance-check
// ---------------------------------------------------------------------------

CovarianceSuiteResult run_covariance_suite(const ExperimentConfig& cfg) {
  const universal::BasisSpec spec{cfg.l_max};
  CovarianceSuiteResult res;
  auto eng = rng::make_engine(cfg.seed);

  const auto identity = universal::d_matrix(Mat2c::Identity(), spec);
  res.identity_deviation = (identity.d - MatX::Identity(spec.size(), spec.size())).cwiseAbs().maxCoeff();

  for (int t = 0; t < cfg.trials; ++t) {
    const Mat2c u1 = rng::haar_su2(eng);
    const Mat2c u2 = rng::haar_su2(eng);
    auto d1 = universal::d_matrix(u1, spec);
    const auto d2 = universal::d_matrix(u2, spec);
    auto d12 = universal::d_matrix(u1 * u2, spec);
    if (cfg.corrupt_dmatrix) d12.d(0, spec.size() - 1) += 1e-3;

    res.composition_max =
        std::max(res.composition_max, (d12.d - d1.d * d2.d).cwiseAbs().maxCoeff());

    for (int l = 0; l <= spec.l_max; ++l) {
      const MatX block = d1.block(l);
      res.block_orthogonality_max = std::max(
          res.block_orthogonality_max,
          (block.transpose() * block - MatX::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff());
    }
    if (cfg.corrupt_dmatrix) d1.d(spec.size() - 1, 0) += 1e-3;
    res.off_block_max = std::max(res.off_block_max, universal::max_off_block(d1));

    // Covariance q(U^dag[x], lambda) = q(x, T_U(lambda)) on a random hidden variable.
    universal::MatrixHV lambda{MatX(2, spec.size())};
    for (int i = 0; i < lambda.coeffs.rows(); ++i)
      for (int j = 0; j < lambda.coeffs.cols(); ++j) lambda.coeffs(i, j) = rng::normal(eng);
    const Vec3 n = rng::unit_vector(eng);
    const Mat3 r_dag = universal::rotation_from_unitary(u1.adjoint());
    const VecX lhs = universal::softmax_rule(lambda, r_dag * n, spec);
    const VecX rhs = universal::softmax_rule(universal::transform_hv(lambda, u1, spec), n, spec);
    res.covariance_max = std::max(res.covariance_max, (lhs - rhs).cwiseAbs().maxCoeff());

    // Microscopic group action on the hidden variables.
    const universal::MatrixHV via_product = universal::transform_hv(lambda, u1 * u2, spec);
    const universal::MatrixHV via_composition =
        universal::transform_hv(universal::transform_hv(lambda, u2, spec), u1, spec);
    const double scale = std::max(1.0, lambda.coeffs.cwiseAbs().maxCoeff());
    res.group_action_max =
        std::max(res.group_action_max,
                 (via_product.coeffs - via_composition.coeffs).cwiseAbs().maxCoeff() / scale);
  }

  // Smoothness along a one-parameter path: central differences of d(U(phi))
  // should converge at O(h^2), i.e. successive halvings shrink the defect 4x.
  {
    auto path = [&](double phi) {
      Mat2c u; // exp(-i phi sigma_y / 2)
      u << std::cos(phi / 2), -std::sin(phi / 2), std::sin(phi / 2), std::cos(phi / 2);
      return universal::d_matrix(u, spec).d;
    };
    const double phi0 = 0.4;
    auto fd = [&](double h) { return MatX((path(phi0 + h) - path(phi0 - h)) / (2.0 * h)); };
    const MatX f1 = fd(0.08), f2 = fd(0.04), f3 = fd(0.02);
    res.smoothness_ratio = (f1 - f2).norm() / (f2 - f3).norm();
  }

  const double tol = 1e-8;
  res.pass = res.identity_deviation == 0.0 && res.composition_max <= tol &&
             res.covariance_max <= tol && res.group_action_max <= tol &&
             res.block_orthogonality_max <= tol && res.off_block_max <= tol;
  return res;
}

// ---------------------------------------------------------------------------
// Output files
// ---------------------------------------------------------------------------

OutputWriter::OutputWriter(std::filesystem::path dir, std::string command,
                           const io::Config& config_echo)
    : dir_(std::move(dir)), command_(std::move(command)), echo_(config_echo) {}

void OutputWriter::add_file(const std::string& name, const std::string& bytes) {
  files_[name] = bytes;
}

void OutputWriter::add_input(const std::string& label, const std::filesystem::path& path) {
  input_hashes_[label] = io::sha256_file(path);
}

std::filesystem::path OutputWriter::commit() {
  std::filesystem::create_directories(dir_);
  json manifest;
  manifest["command"] = command_;
  json cfg_echo = json::object();
  for (const auto& [k, v] : echo_.values()) cfg_echo[k] = v;
  manifest["config"] = cfg_echo;
  json inputs = json::object();
  for (const auto& [k, v] : input_hashes_) inputs[k] = v;
  manifest["inputs"] = inputs;
  json outputs = json::object();
  for (const auto& [name, bytes] : files_) outputs[name] = io::sha256_hex(bytes);
  manifest["outputs"] = outputs;

  for (const auto& [name, bytes] : files_) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + (dir_ / name).string());
    out << bytes;
  }
  const auto manifest_path = dir_ / "manifest.json";
  std::ofstream out(manifest_path, std::ios::binary);
  out << manifest.dump(2) << "\n";
  return manifest_path;
}

namespace {

std::string fd(double v) { return io::format_double(v); }

json report_json(const dynamics::FeasibilityReport& r) {
  json j;
  j["basis_degree"] = r.basis_degree;
  j["state_count"] = r.state_count;
  j["nodes_total"] = r.nodes_total;
  j["nodes_used"] = r.nodes_used;
  j["rows"] = r.rows;
  j["columns"] = r.columns;
  j["b_norm"] = r.b_norm;
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["pointwise_bound_abs"] = r.pointwise_bound_abs;
  j["pointwise_bound_rel"] = r.pointwise_bound_rel;
  j["rank"] = r.rank;
  j["condition_estimate"] = r.condition_estimate;
  j["rank_deficient"] = r.rank_deficient;
  j["solver"] = r.solver;
  return j;
}

} // namespace

std::string static_sweep_csv(const StaticSweepResult& r) {
  std::string out = "state,setting,n1_x,n1_y,n1_z,n2_x,n2_y,n2_z,outcome1,outcome2,"
                    "p_lhv,p_quantum,abs_err,std_err\n";
  for (const auto& row : r.rows) {
    out += io::csv_row({std::to_string(row.state), std::to_string(row.setting), fd(row.dirs.n1[0]),
                        fd(row.dirs.n1[1]), fd(row.dirs.n1[2]), fd(row.dirs.n2[0]),
                        fd(row.dirs.n2[1]), fd(row.dirs.n2[2]), row.outcome1 ? "down" : "up",
                        row.outcome2 ? "down" : "up", fd(row.p_lhv), fd(row.p_quantum),
                        fd(row.abs_err), fd(row.std_err)});
  }
  return out;
}

std::string static_sweep_json(const StaticSweepResult& r, const ExperimentConfig& cfg) {
  json j;
  j["states"] = r.states;
  j["settings_per_state"] = r.settings_per_state;
  j["comparisons"] = r.rows.size();
  j["max_abs_err"] = r.max_abs_err;
  j["mean_abs_err"] = r.mean_abs_err;
  j["max_samples_used"] = r.max_samples_used;
  j["tolerance"] = cfg.integrator.tolerance;
  j["converged"] = r.converged;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

std::string residual_curve_csv(const VelocityExperimentResult& r) {
  std::string out = "L,columns,rows,abs_residual,rel_residual,pointwise_bound_rel,"
                    "control_rel_residual\n";
  for (std::size_t i = 0; i < r.counterexample.size(); ++i) {
    const auto& ce = r.counterexample[i];
    const auto& ct = r.control[i];
    out += io::csv_row({std::to_string(ce.basis_degree), std::to_string(ce.columns),
                        std::to_string(ce.rows), fd(ce.abs_residual), fd(ce.rel_residual),
                        fd(ce.pointwise_bound_rel), fd(ct.rel_residual)});
  }
  return out;
}

std::string velocity_json(const VelocityExperimentResult& r, const ExperimentConfig& cfg) {
  json j;
  j["omega"] = cfg.omega;
  j["degrees"] = cfg.degree_list;
  j["basis_truncation"] = cfg.basis_truncation;
  json ce = json::array();
  for (const auto& rep : r.counterexample) ce.push_back(report_json(rep));
  j["counterexample"] = ce;
  json ct = json::array();
  for (const auto& rep : r.control) ct.push_back(report_json(rep));
  j["control"] = ct;
  json chain;
  chain["max_divergence"] = r.chain.max_divergence;
  chain["max_cross_normal"] = r.chain.max_cross_normal;
  chain["max_noncollinear"] = r.chain.max_noncollinear;
  chain["max_field_norm"] = r.chain.max_field_norm;
  chain["max_forced_norm"] = r.chain.max_forced_norm;
  chain["nodes_checked"] = r.chain.nodes_checked;
  j["chain_check"] = chain;
  j["analytic_control_residual"] = r.analytic_control_residual;
  j["plateau_threshold"] = r.plateau_threshold;
  j["plateau_met"] = r.plateau_met;
  j["control_met"] = r.control_met;
  j["contrast_met"] = r.contrast_met;
  return j.dump(2) + "\n";
}

std::string nogo_table_csv(const std::vector<nogo::ConstraintRow>& rows) {
  std::string out = "D,d,N,B_QM,B_LHV,feasible\n";
  for (const auto& row : rows) {
    out += io::csv_row({std::to_string(row.d_qudit), std::to_string(row.d_hidden),
                        std::to_string(row.n_particles), row.b_qm.str(), row.b_lhv.str(),
                        row.feasible ? "1" : "0"});
  }
  return out;
}

std::string nogo_summary_json(const ExperimentConfig& cfg) {
  json j;
  json rows = json::array();
  for (int dq : cfg.nogo_qudit_dims)
    for (int dh : cfg.nogo_hidden_dims) {
      json entry;
      entry["D"] = dq;
      entry["d"] = dh;
      entry["max_particles"] = nogo::max_particles(dq, dh);
      rows.push_back(entry);
    }
  j["max_particles"] = rows;
  return j.dump(2) + "\n";
}

std::string covariance_json(const CovarianceSuiteResult& r, const ExperimentConfig& cfg) {
  json j;
  j["l_max"] = cfg.l_max;
  j["trials"] = cfg.trials;
  j["identity_deviation"] = r.identity_deviation;
  j["composition_max"] = r.composition_max;
  j["covariance_max"] = r.covariance_max;
  j["group_action_max"] = r.group_action_max;
  j["block_orthogonality_max"] = r.block_orthogonality_max;
  j["off_block_max"] = r.off_block_max;
  j["smoothness_ratio"] = r.smoothness_ratio;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

std::string dmatrix_csv(const universal::DMatrix& d) {
  std::string out;
  for (Eigen::Index i = 0; i < d.d.rows(); ++i) {
    std::vector<std::string> fields;
    fields.reserve(d.d.cols());
    for (Eigen::Index j = 0; j < d.d.cols(); ++j) fields.push_back(fd(d.d(i, j)));
    out += io::csv_row(fields);
  }
  return out;
}

std::string basis_manifest_json(const universal::BasisSpec& spec) {
  json j;
  j["l_max"] = spec.l_max;
  j["size"] = spec.size();
  j["convention"] = "real orthonormal spherical harmonics, Condon-Shortley-free; "
                    "m < 0 -> sin(|m| phi), m > 0 -> cos(m phi)";
  json entries = json::array();
  for (int l = 0; l <= spec.l_max; ++l)
    for (int m = -l; m <= l; ++m) {
      json e;
      e["index"] = spec.index(l, m);
      e["l"] = l;
      e["m"] = m;
      entries.push_back(e);
    }
  j["basis"] = entries;
  return j.dump(2) + "\n";
}

std::string derivatives_csv(const std::vector<quantum::BlochTwoQubit>& states, double omega) {
  std::string out = "state,adot_x,adot_y,adot_z,bdot_x,bdot_y,bdot_z,"
                    "Tdot_11,Tdot_12,Tdot_13,Tdot_21,Tdot_22,Tdot_23,Tdot_31,Tdot_32,Tdot_33\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto d = quantum::bloch_derivatives(states[i], omega);
    std::vector<std::string> fields{std::to_string(i)};
    for (int k = 0; k < 3; ++k) fields.push_back(fd(d.adot[k]));
    for (int k = 0; k < 3; ++k) fields.push_back(fd(d.bdot[k]));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) fields.push_back(fd(d.Tdot(r, c)));
    out += io::csv_row(fields);
  }
  return out;
}

} // namespace lhv::experiments
