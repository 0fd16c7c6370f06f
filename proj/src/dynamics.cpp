#include "lhv/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace lhv::dynamics {

namespace {

Vec3 normalized(const Vec3& v) { return v / v.norm(); }

Vec3 rotate_z(const Vec3& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]};
}

} // namespace

// ---------------------------------------------------------------------------
// Pointwise operators
// ---------------------------------------------------------------------------

DensityTimeDerivative::DensityTimeDerivative(const BlochTwoQubit& s, double omega, double dt)
    : dt_(dt),
      base_(s),
      plus_(quantum::evolve_bloch(s, omega, dt)),
      minus_(quantum::evolve_bloch(s, omega, -dt)),
      plus_half_(quantum::evolve_bloch(s, omega, 0.5 * dt)),
      minus_half_(quantum::evolve_bloch(s, omega, -0.5 * dt)) {
  if (dt <= 0.0) throw std::invalid_argument("time step must be positive");
}

double DensityTimeDerivative::value(const Vec3& l1, const Vec3& l2) const {
  return (plus_.value(l1, l2) - minus_.value(l1, l2)) / (2.0 * dt_);
}

double DensityTimeDerivative::error_estimate(const Vec3& l1, const Vec3& l2) const {
  const double full = value(l1, l2);
  const double half = (plus_half_.value(l1, l2) - minus_half_.value(l1, l2)) / dt_;
  return std::abs(half - full) / 3.0;
}

std::pair<Vec3, Vec3> density_surface_gradient(const TwoQubitLhvDensity& density, const Vec3& l1,
                                               const Vec3& l2, GradientMode mode, double h) {
  if (mode == GradientMode::Analytic) {
    Vec3 g1, g2;
    density.ambient_gradient(l1, l2, g1, g2);
    g1 -= l1 * g1.dot(l1);
    g2 -= l2 * g2.dot(l2);
    return {g1, g2};
  }
  auto fd_on_sphere = [&](const Vec3& x, auto&& eval) {
    Vec3 e1, e2;
    tangent_frame(x, e1, e2);
    const double d1 = (eval(normalized(x + h * e1)) - eval(normalized(x - h * e1))) / (2.0 * h);
    const double d2 = (eval(normalized(x + h * e2)) - eval(normalized(x - h * e2))) / (2.0 * h);
    return Vec3(d1 * e1 + d2 * e2);
  };
  const Vec3 g1 = fd_on_sphere(l1, [&](const Vec3& x) { return density.value(x, l2); });
  const Vec3 g2 = fd_on_sphere(l2, [&](const Vec3& x) { return density.value(l1, x); });
  return {g1, g2};
}

double surface_divergence_fd(const std::function<Vec3(const Vec3&)>& field, const Vec3& x,
                             double h) {
  Vec3 e1, e2;
  tangent_frame(x, e1, e2);
  double div = 0.0;
  for (const Vec3& e : {e1, e2}) {
    const Vec3 dplus = field(normalized(x + h * e));
    const Vec3 dminus = field(normalized(x - h * e));
    div += e.dot(dplus - dminus) / (2.0 * h);
  }
  return div;
}

void tangent_frame(const Vec3& x, Vec3& e1, Vec3& e2) {
  const Vec3 seed = std::abs(x[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = normalized(seed.cross(x));
  e2 = x.cross(e1);
}

// ---------------------------------------------------------------------------
// Grids with kink exclusion
// ---------------------------------------------------------------------------

namespace {

// Normals of the kink circles {u . lambda = 0} contributed by one state on one
// of the two spheres (first sphere: a-hat and the left singular vectors).
void collect_circles(const BlochTwoQubit& s, int sphere, std::vector<Vec3>& out) {
  const auto svd = quantum::singular_data(s.T);
  const Vec3& local = (sphere == 0) ? s.a : s.b;
  if (local.norm() > 1e-14) out.push_back(local.normalized());
  for (int j = 0; j < 3; ++j) {
    if (svd.S[j] > 1e-14)
      out.push_back(sphere == 0 ? Vec3(svd.U.col(j)) : Vec3(svd.V.col(j)));
  }
}

std::vector<char> usable_mask(const sph::SphereGrid& grid, const std::vector<Vec3>& circles,
                              double radius) {
  const double min_dot = std::sin(radius);
  std::vector<char> mask(grid.size(), 1);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto& u : circles)
      if (std::abs(u.dot(grid.nodes[i])) < min_dot) {
        mask[i] = 0;
        break;
      }
  return mask;
}

} // namespace

ProductGrid ProductGrid::build(int n_theta, int n_phi, const std::vector<BlochTwoQubit>& states,
                               double kink_radius) {
  ProductGrid g;
  g.s1 = sph::sphere_grid(n_theta, n_phi);
  g.s2 = sph::sphere_grid(n_theta, n_phi);
  std::vector<Vec3> circles1, circles2;
  for (const auto& s : states) {
    collect_circles(s, 0, circles1);
    collect_circles(s, 1, circles2);
  }
  const auto mask1 = usable_mask(g.s1, circles1, kink_radius);
  const auto mask2 = usable_mask(g.s2, circles2, kink_radius);

  const double lo = std::sin(kink_radius);
  const double hi = std::cos(kink_radius);
  g.total = g.s1.size() * g.s2.size();
  for (std::size_t i = 0; i < g.s1.size(); ++i) {
    if (!mask1[i]) continue;
    for (std::size_t j = 0; j < g.s2.size(); ++j) {
      if (!mask2[j]) continue;
      const double dot = std::abs(g.s1.nodes[i].dot(g.s2.nodes[j]));
      if (dot < lo || dot > hi) continue;
      g.usable.push_back({int(i), int(j), g.s1.weights[i] * g.s2.weights[j]});
    }
  }
  if (g.usable.empty()) throw std::runtime_error("kink exclusion removed every grid pair");
  return g;
}

SingleGrid SingleGrid::build(int n_theta, int n_phi, const std::vector<Vec3>& bloch_samples,
                             double kink_radius) {
  SingleGrid g;
  g.grid = sph::sphere_grid(n_theta, n_phi);
  std::vector<Vec3> circles;
  for (const auto& r : bloch_samples)
    if (r.norm() > 1e-14) circles.push_back(r.normalized());
  const auto mask = usable_mask(g.grid, circles, kink_radius);
  g.total = g.grid.size();
  for (std::size_t i = 0; i < g.grid.size(); ++i)
    if (mask[i]) g.usable.push_back(int(i));
  if (g.usable.empty()) throw std::runtime_error("kink exclusion removed every grid node");
  return g;
}

// ---------------------------------------------------------------------------
// Normal-equation solver shared by both feasibility problems
// ---------------------------------------------------------------------------

namespace {

struct SolveDiagnostics {
  int rank = 0;
  double cond = 0.0;
  bool deficient = false;
  std::string method;
};

VecX solve_normal_equations(const MatX& gram, const VecX& rhs, const FeasibilityOptions& opt,
                            SolveDiagnostics& diag) {
  const int n = static_cast<int>(gram.rows());
  if (n <= opt.dense_eig_max) {
    Eigen::SelfAdjointEigenSolver<MatX> es(gram);
    const VecX& ev = es.eigenvalues();
    const double cutoff = std::max(ev.maxCoeff(), 0.0) * opt.rank_rel_tol;
    VecX inv = VecX::Zero(n);
    double ev_min_kept = 0.0;
    for (int i = 0; i < n; ++i) {
      if (ev[i] > cutoff) {
        inv[i] = 1.0 / ev[i];
        if (ev_min_kept == 0.0) ev_min_kept = ev[i]; // eigenvalues are ascending
        diag.rank += 1;
      }
    }
    diag.method = "eig-pinv";
    diag.deficient = diag.rank < n;
    diag.cond = (ev_min_kept > 0.0) ? std::sqrt(ev.maxCoeff() / ev_min_kept) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * rhs;
  }

  // Large systems: tiny Tikhonov ridge keeps the factorization stable; the
  // perturbation of the solution is O(1e-13) relative.
  const double mu = gram.trace() / n * 1e-13;
  MatX reg = gram;
  reg.diagonal().array() += mu;
  Eigen::LDLT<MatX> ldlt(reg);
  const VecX d = ldlt.vectorD().cwiseAbs();
  const double dmax = d.maxCoeff();
  double dmin_kept = dmax;
  for (int i = 0; i < n; ++i) {
    if (d[i] > dmax * opt.rank_rel_tol) {
      diag.rank += 1;
      dmin_kept = std::min(dmin_kept, d[i]);
    }
  }
  diag.method = "ldlt-ridge";
  diag.deficient = diag.rank < n;
  diag.cond = std::sqrt(dmax / dmin_kept);
  return ldlt.solve(rhs);
}

// Rank factor F of a small symmetric PSD matrix K = F F^T via eigendecomposition.
MatX psd_factor(const MatX& k) {
  Eigen::SelfAdjointEigenSolver<MatX> es(k);
  VecX ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

} // namespace

// ---------------------------------------------------------------------------
// Two-qubit feasibility system
// ---------------------------------------------------------------------------

FeasibilitySystem::FeasibilitySystem(std::vector<BlochTwoQubit> states, int degree,
                                     FeasibilityOptions opt)
    : states_(std::move(states)),
      opt_(opt),
      basis_(degree, opt.truncation),
      grid_(ProductGrid::build(opt.n_theta, opt.n_phi, states_, opt.kink_radius)) {
  if (states_.empty()) throw std::invalid_argument("feasibility system needs at least one state");
  tables1_.build(degree, grid_.s1.nodes);
  tables2_.build(degree, grid_.s2.nodes);
  ddt_.reserve(states_.size());
  for (const auto& s : states_) ddt_.emplace_back(s, opt_.omega, opt_.dt);
  assemble();
}

std::size_t FeasibilitySystem::rows() const { return grid_.usable.size() * states_.size(); }

void FeasibilitySystem::assemble() {
  const int c = basis_.size();
  const int ns = static_cast<int>(states_.size());
  gram_ = MatX::Zero(c, c);
  rhs_ = VecX::Zero(c);
  b_norm2_ = 0.0;
  double bound2 = 0.0;

  const int chunk = std::max(1, opt_.chunk_pairs);
  MatX m(7, c);
  MatX zt(c, 7 * chunk);
  MatX k(7, 7);
  VecX kb(7);
  MatX pw(ns, 5);
  VecX pwb(ns);

  int in_chunk = 0;
  auto flush = [&]() {
    if (in_chunk == 0) return;
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(zt.leftCols(7 * in_chunk), 1.0);
    in_chunk = 0;
  };

  for (const auto& pair : grid_.usable) {
    const Vec3& l1 = grid_.s1.nodes[pair.i1];
    const Vec3& l2 = grid_.s2.nodes[pair.i2];
    const double sw = std::sqrt(pair.w);

    basis_.fill_node_matrix(tables1_, pair.i1, tables2_, pair.i2, m);

    Vec3 t11, t12, t21, t22;
    tangent_frame(l1, t11, t12);
    tangent_frame(l2, t21, t22);

    k.setZero();
    kb.setZero();
    Eigen::Matrix<double, 7, 1> z;
    for (int s = 0; s < ns; ++s) {
      Vec3 g1, g2;
      ddt_[s].base().ambient_gradient(l1, l2, g1, g2);
      const double p = ddt_[s].base().value(l1, l2);
      z << sw * g1, sw * g2, sw * p;
      const double b = -sw * ddt_[s].value(l1, l2);
      k.selfadjointView<Eigen::Lower>().rankUpdate(z, 1.0);
      kb += z * b;
      b_norm2_ += b * b;
      pw.row(s) << sw * g1.dot(t11), sw * g1.dot(t12), sw * g2.dot(t21), sw * g2.dot(t22), sw * p;
      pwb[s] = b;
    }
    k = MatX(k.selfadjointView<Eigen::Lower>());

    rhs_.noalias() += m.transpose() * kb;
    zt.middleCols(7 * in_chunk, 7).noalias() = m.transpose() * psd_factor(k);
    ++in_chunk;
    if (in_chunk == chunk) flush();

    bound2 += (pw * pw.colPivHouseholderQr().solve(pwb) - pwb).squaredNorm();
  }
  flush();
  gram_ = MatX(gram_.selfadjointView<Eigen::Lower>());
  pointwise_bound_ = std::sqrt(bound2);
}

double FeasibilitySystem::residual(const VecX& coeffs) const {
  if (coeffs.size() != basis_.size()) throw std::invalid_argument("coefficient count mismatch");
  const int ns = static_cast<int>(states_.size());
  MatX m(7, basis_.size());
  double r2 = 0.0;
  for (const auto& pair : grid_.usable) {
    const Vec3& l1 = grid_.s1.nodes[pair.i1];
    const Vec3& l2 = grid_.s2.nodes[pair.i2];
    const double sw = std::sqrt(pair.w);
    basis_.fill_node_matrix(tables1_, pair.i1, tables2_, pair.i2, m);
    const Eigen::Matrix<double, 7, 1> mv = m * coeffs;
    for (int s = 0; s < ns; ++s) {
      Vec3 g1, g2;
      ddt_[s].base().ambient_gradient(l1, l2, g1, g2);
      const double p = ddt_[s].base().value(l1, l2);
      const double row = sw * (g1.dot(mv.segment<3>(0)) + g2.dot(mv.segment<3>(3)) + p * mv[6]);
      const double b = -sw * ddt_[s].value(l1, l2);
      r2 += (row - b) * (row - b);
    }
  }
  return std::sqrt(r2);
}

double FeasibilitySystem::row_value(const VecX& coeffs, std::size_t usable_pair_index,
                                    int state_index) const {
  const auto& pair = grid_.usable.at(usable_pair_index);
  const Vec3& l1 = grid_.s1.nodes[pair.i1];
  const Vec3& l2 = grid_.s2.nodes[pair.i2];
  Vec3 v1, v2;
  double div;
  basis_.evaluate(coeffs, l1, l2, v1, v2, div);
  const auto& d = ddt_.at(state_index);
  Vec3 g1, g2;
  d.base().ambient_gradient(l1, l2, g1, g2);
  return d.value(l1, l2) + g1.dot(v1) + g2.dot(v2) + d.base().value(l1, l2) * div;
}

void FeasibilitySystem::materialize(MatX& a, VecX& b) const {
  const int ns = static_cast<int>(states_.size());
  a.resize(rows(), basis_.size());
  b.resize(rows());
  MatX m(7, basis_.size());
  std::size_t row = 0;
  for (const auto& pair : grid_.usable) {
    const Vec3& l1 = grid_.s1.nodes[pair.i1];
    const Vec3& l2 = grid_.s2.nodes[pair.i2];
    const double sw = std::sqrt(pair.w);
    basis_.fill_node_matrix(tables1_, pair.i1, tables2_, pair.i2, m);
    Eigen::Matrix<double, 7, 1> z;
    for (int s = 0; s < ns; ++s) {
      Vec3 g1, g2;
      ddt_[s].base().ambient_gradient(l1, l2, g1, g2);
      z << sw * g1, sw * g2, sw * ddt_[s].base().value(l1, l2);
      a.row(row) = z.transpose() * m;
      b[row] = -sw * ddt_[s].value(l1, l2);
      ++row;
    }
  }
}

FitResult fit_velocity_field(const MatX& a, const VecX& b, const FeasibilityOptions& opt) {
  if (a.rows() != b.size()) throw std::invalid_argument("row count mismatch between A and b");
  const MatX gram = a.transpose() * a;
  const VecX rhs = a.transpose() * b;
  SolveDiagnostics diag;
  FitResult out;
  out.coefficients = solve_normal_equations(gram, rhs, opt, diag);

  FeasibilityReport& r = out.report;
  r.rows = static_cast<std::size_t>(a.rows());
  r.columns = static_cast<int>(a.cols());
  r.b_norm = b.norm();
  r.abs_residual = (a * out.coefficients - b).norm();
  r.rel_residual = (r.b_norm > 0.0) ? r.abs_residual / r.b_norm : 0.0;
  r.rank = diag.rank;
  r.condition_estimate = diag.cond;
  r.rank_deficient = diag.deficient;
  r.solver = diag.method;
  return out;
}

FitResult fit_velocity_field(const FeasibilitySystem& system) {
  SolveDiagnostics diag;
  FitResult out;
  out.coefficients = solve_normal_equations(system.gram(), system.rhs(), system.options(), diag);

  FeasibilityReport& r = out.report;
  r.basis_degree = system.basis().degree();
  r.state_count = static_cast<int>(system.states().size());
  r.nodes_total = system.grid().total;
  r.nodes_used = system.grid().usable.size();
  r.rows = system.rows();
  r.columns = system.columns();
  r.b_norm = system.b_norm();
  r.abs_residual = system.residual(out.coefficients);
  r.rel_residual = (r.b_norm > 0.0) ? r.abs_residual / r.b_norm : 0.0;
  r.pointwise_bound_abs = system.pointwise_bound();
  r.pointwise_bound_rel = (r.b_norm > 0.0) ? r.pointwise_bound_abs / r.b_norm : 0.0;
  r.rank = diag.rank;
  r.condition_estimate = diag.cond;
  r.rank_deficient = diag.deficient;
  r.solver = diag.method;
  return out;
}

FitResult fit_velocity_field(const std::vector<BlochTwoQubit>& states, int degree,
                             const FeasibilityOptions& opt) {
  return fit_velocity_field(FeasibilitySystem(states, degree, opt));
}

// ---------------------------------------------------------------------------
// Single-qubit control
// ---------------------------------------------------------------------------

namespace {

double single_density(const Vec3& r, const Vec3& lambda) {
  return bell::single_qubit_density(r, lambda);
}

Vec3 single_gradient(const Vec3& r, const Vec3& lambda) {
  const Vec3 g = 4.0 * bell::theta(r.dot(lambda)) * r / kFourPi;
  return g - lambda * g.dot(lambda);
}

double single_ddt(const Vec3& r, double omega, double dt, const Vec3& lambda) {
  const Vec3 rp = rotate_z(r, omega * dt);
  const Vec3 rm = rotate_z(r, -omega * dt);
  return (single_density(rp, lambda) - single_density(rm, lambda)) / (2.0 * dt);
}

} // namespace

SingleQubitFeasibility::SingleQubitFeasibility(std::vector<Vec3> bloch_samples, int degree,
                                               FeasibilityOptions opt)
    : samples_(std::move(bloch_samples)),
      opt_(opt),
      basis_(degree),
      grid_(SingleGrid::build(opt.n_theta, opt.n_phi, samples_, opt.kink_radius)) {
  if (samples_.empty()) throw std::invalid_argument("control problem needs at least one sample");
  for (const auto& r : samples_)
    if (r.norm() > 1.0 + 1e-12) throw std::invalid_argument("Bloch sample has norm > 1");
  tables_.build(degree, grid_.grid.nodes);

  const int c = basis_.size();
  gram_ = MatX::Zero(c, c);
  rhs_ = VecX::Zero(c);
  MatX m(4, c);
  MatX k(4, 4);
  VecX kb(4);
  for (int idx : grid_.usable) {
    const Vec3& lambda = grid_.grid.nodes[idx];
    const double sw = std::sqrt(grid_.grid.weights[idx]);
    basis_.fill_node_matrix(tables_, idx, m);
    k.setZero();
    kb.setZero();
    Eigen::Matrix<double, 4, 1> z;
    for (const auto& r : samples_) {
      z << sw * single_gradient(r, lambda), sw * single_density(r, lambda);
      const double b = -sw * single_ddt(r, opt_.omega, opt_.dt, lambda);
      k.selfadjointView<Eigen::Lower>().rankUpdate(z, 1.0);
      kb += z * b;
      b_norm2_ += b * b;
    }
    k = MatX(k.selfadjointView<Eigen::Lower>());
    rhs_.noalias() += m.transpose() * kb;
    const MatX zt = m.transpose() * psd_factor(k);
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(zt, 1.0);
  }
  gram_ = MatX(gram_.selfadjointView<Eigen::Lower>());
}

double SingleQubitFeasibility::residual(const VecX& coeffs) const {
  MatX m(4, basis_.size());
  double r2 = 0.0;
  for (int idx : grid_.usable) {
    const Vec3& lambda = grid_.grid.nodes[idx];
    const double sw = std::sqrt(grid_.grid.weights[idx]);
    basis_.fill_node_matrix(tables_, idx, m);
    const Eigen::Matrix<double, 4, 1> mv = m * coeffs;
    for (const auto& r : samples_) {
      const double row =
          sw * (single_gradient(r, lambda).dot(mv.segment<3>(0)) +
                single_density(r, lambda) * mv[3]);
      const double b = -sw * single_ddt(r, opt_.omega, opt_.dt, lambda);
      r2 += (row - b) * (row - b);
    }
  }
  return std::sqrt(r2);
}

FitResult SingleQubitFeasibility::fit() const {
  SolveDiagnostics diag;
  FitResult out;
  out.coefficients = solve_normal_equations(gram_, rhs_, opt_, diag);

  FeasibilityReport& r = out.report;
  r.basis_degree = basis_.degree();
  r.state_count = static_cast<int>(samples_.size());
  r.nodes_total = grid_.total;
  r.nodes_used = grid_.usable.size();
  r.rows = grid_.usable.size() * samples_.size();
  r.columns = basis_.size();
  r.b_norm = b_norm();
  r.abs_residual = residual(out.coefficients);
  r.rel_residual = (r.b_norm > 0.0) ? r.abs_residual / r.b_norm : 0.0;
  r.rank = diag.rank;
  r.condition_estimate = diag.cond;
  r.rank_deficient = diag.deficient;
  r.solver = diag.method;
  return out;
}

double SingleQubitFeasibility::max_pointwise_residual(
    const std::function<Vec3(const Vec3&)>& field) const {
  double worst = 0.0;
  for (int idx : grid_.usable) {
    const Vec3& lambda = grid_.grid.nodes[idx];
    const double div = surface_divergence_fd(field, lambda);
    const Vec3 v = field(lambda);
    for (const auto& r : samples_) {
      const double res = single_ddt(r, opt_.omega, opt_.dt, lambda) +
                         single_gradient(r, lambda).dot(v) + single_density(r, lambda) * div;
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

FeasibilityReport single_qubit_control(double omega, const std::vector<Vec3>& bloch_samples,
                                       int n_theta, int n_phi, int degree, double kink_radius) {
  FeasibilityOptions opt;
  opt.omega = omega;
  opt.n_theta = n_theta;
  opt.n_phi = n_phi;
  opt.kink_radius = kink_radius;
  return SingleQubitFeasibility(bloch_samples, degree, opt).fit().report;
}

// ---------------------------------------------------------------------------
// Analytic chain check
// ---------------------------------------------------------------------------

std::pair<double, double> force_chain_scalars(double v1, double v2, double c, double tol) {
  double best1 = 0.0, best2 = 0.0;
  double best = v1 * v1 + v2 * v2; // distance to (0, 0), always a solution
  auto consider = [&](double w1, double w2) {
    const double d = (w1 - v1) * (w1 - v1) + (w2 - v2) * (w2 - v2);
    if (d < best) {
      best = d;
      best1 = w1;
      best2 = w2;
    }
  };
  if (std::abs(c) < tol) {
    consider(v1, 0.0);
    consider(0.0, v2);
  }
  if (std::abs(c - 1.0) < tol) {
    const double t = 0.5 * (v1 - v2); // projection onto the line v2 = -v1
    consider(t, -t);
  }
  if (std::abs(c + 1.0) < tol) {
    const double t = 0.5 * (v1 + v2); // line v2 = v1
    consider(t, t);
  }
  return {best1, best2};
}

TangentField evaluate_on_grid(const ProductVelocityBasis& basis, const VecX& coeffs,
                              const ProductGrid& grid) {
  TangentField field;
  field.v1.reserve(grid.usable.size());
  field.v2.reserve(grid.usable.size());
  field.divergence.reserve(grid.usable.size());
  SphereNodeTables t1, t2;
  t1.build(basis.degree(), grid.s1.nodes);
  t2.build(basis.degree(), grid.s2.nodes);
  MatX m(7, basis.size());
  for (const auto& pair : grid.usable) {
    basis.fill_node_matrix(t1, pair.i1, t2, pair.i2, m);
    const VecX row = m * coeffs;
    field.v1.emplace_back(row.segment<3>(0));
    field.v2.emplace_back(row.segment<3>(3));
    field.divergence.push_back(row[6]);
  }
  return field;
}

double max_tangency_violation(const TangentField& field, const ProductGrid& grid) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.usable.size(); ++i) {
    worst = std::max(worst, std::abs(field.v1[i].dot(grid.s1.nodes[grid.usable[i].i1])));
    worst = std::max(worst, std::abs(field.v2[i].dot(grid.s2.nodes[grid.usable[i].i2])));
  }
  return worst;
}

ChainCheckReport analytic_chain_check(const TangentField& field, const ProductGrid& grid,
                                      double exclusion_radius) {
  if (field.v1.size() != grid.usable.size())
    throw std::invalid_argument("field is not sampled on this grid");
  ChainCheckReport rep;
  const double lo = std::sin(exclusion_radius);
  const double hi = std::cos(exclusion_radius);

  for (std::size_t i = 0; i < grid.usable.size(); ++i) {
    const auto& pair = grid.usable[i];
    const Vec3& l1 = grid.s1.nodes[pair.i1];
    const Vec3& l2 = grid.s2.nodes[pair.i2];
    const double dot = l1.dot(l2);
    if (std::abs(dot) < lo || std::abs(dot) > hi) continue;

    const Vec3& v1 = field.v1[i];
    const Vec3& v2 = field.v2[i];
    const double div = field.divergence[i];

    const Vec3 cross = normalized(l1.cross(l2));
    const double s1 = v1.dot(cross);
    const double s2 = v2.dot(cross);

    rep.max_divergence = std::max(rep.max_divergence, std::abs(div));
    rep.max_cross_normal =
        std::max({rep.max_cross_normal, std::abs(v1.dot(l2)), std::abs(v2.dot(l1))});
    rep.max_noncollinear =
        std::max({rep.max_noncollinear, (v1 - s1 * cross).norm(), (v2 - s2 * cross).norm()});
    rep.max_field_norm = std::max({rep.max_field_norm, v1.norm(), v2.norm()});

    const auto [f1, f2] = force_chain_scalars(s1, s2, dot, exclusion_radius);
    rep.max_forced_norm = std::max({rep.max_forced_norm, std::abs(f1), std::abs(f2)});
    ++rep.nodes_checked;
  }
  return rep;
}

ChainCheckReport analytic_chain_check(const ProductVelocityBasis& basis, const VecX& coeffs,
                                      const ProductGrid& grid, double exclusion_radius) {
  return analytic_chain_check(evaluate_on_grid(basis, coeffs, grid), grid, exclusion_radius);
}

} // namespace lhv::dynamics
