#pragma once

#include "lhv/bell.hpp"
#include "lhv/quantum.hpp"
#include "lhv/velocity_basis.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lhv::dynamics {

using bell::TwoQubitLhvDensity;
using quantum::BlochTwoQubit;

// ---------------------------------------------------------------------------
// Pointwise differential operators on the hidden-variable densities.
// ---------------------------------------------------------------------------

// d/dt p_{a(t),b(t),T(t)} at t = 0, by central differences of the closed-form
// density along the Heisenberg flow. Construction fails if the evolved
// parameters leave the construction domain ||a|| + ||b|| + sum S_j <= 1.
class DensityTimeDerivative {
 public:
  DensityTimeDerivative(const BlochTwoQubit& s, double omega, double dt = 1e-5);

  double value(const Vec3& l1, const Vec3& l2) const;
  // Richardson error estimate from a half-step evaluation.
  double error_estimate(const Vec3& l1, const Vec3& l2) const;
  double step() const { return dt_; }

  const TwoQubitLhvDensity& base() const { return base_; }

 private:
  double dt_;
  TwoQubitLhvDensity base_;
  TwoQubitLhvDensity plus_, minus_, plus_half_, minus_half_;
};

enum class GradientMode { Analytic, FiniteDifference };

// Tangential surface gradients (d p / d lambda_1, d p / d lambda_2), the
// ambient gradient of the closed form projected onto the tangent planes.
// The finite-difference mode exists as an independent route for validation.
std::pair<Vec3, Vec3> density_surface_gradient(const TwoQubitLhvDensity& density, const Vec3& l1,
                                               const Vec3& l2,
                                               GradientMode mode = GradientMode::Analytic,
                                               double h = 1e-6);

// Surface divergence of a tangential field on S^2 given as a callable, by
// central differences along two tangent directions (pole-free by construction
// of the local frame).
double surface_divergence_fd(const std::function<Vec3(const Vec3&)>& field, const Vec3& x,
                             double h = 1e-5);

// Orthonormal tangent frame at a point of S^2.
void tangent_frame(const Vec3& x, Vec3& e1, Vec3& e2);

// ---------------------------------------------------------------------------
// Node grids with kink exclusion.
// ---------------------------------------------------------------------------

// Product grid on S^2 x S^2. Pairs within `kink_radius` (radians) of any kink
// circle of the supplied states, or with lambda_1 . lambda_2 near {-1, 0, 1},
// are dropped.
struct ProductGrid {
  sph::SphereGrid s1, s2;

  struct Pair {
    int i1, i2;
    double w;
  };
  std::vector<Pair> usable;
  std::size_t total = 0;

  static ProductGrid build(int n_theta, int n_phi, const std::vector<BlochTwoQubit>& states,
                           double kink_radius);
};

// Single-sphere grid; kink circles are r . lambda = 0 for the sample Bloch vectors.
struct SingleGrid {
  sph::SphereGrid grid;
  std::vector<int> usable;
  std::size_t total = 0;

  static SingleGrid build(int n_theta, int n_phi, const std::vector<Vec3>& bloch_samples,
                          double kink_radius);
};

// A velocity field sampled on the usable pairs of a ProductGrid: one pair of
// tangent vectors per node, in node order.
struct TangentField {
  std::vector<Vec3> v1;
  std::vector<Vec3> v2;
  std::vector<double> divergence;
};

// Largest |V_j . lambda_j| over the grid (tangency defect; 0 by construction
// for fields evaluated from a velocity basis).
double max_tangency_violation(const TangentField& field, const ProductGrid& grid);

// ---------------------------------------------------------------------------
// Least-squares feasibility of the continuity equation.
// ---------------------------------------------------------------------------

struct FeasibilityOptions {
  double omega = 1.0;
  double dt = 1e-5;
  double kink_radius = 1e-3;
  int n_theta = 8;
  int n_phi = 12;
  ProductVelocityBasis::Truncation truncation = ProductVelocityBasis::Truncation::TotalDegree;
  int chunk_pairs = 192;       // grid pairs per rank-update block
  double rank_rel_tol = 1e-11; // eigenvalue / pivot cutoff relative to the largest
  int dense_eig_max = 2200;    // up to this column count solve by eigendecomposition
};

struct FeasibilityReport {
  int basis_degree = 0;
  int state_count = 0;
  std::size_t nodes_total = 0;
  std::size_t nodes_used = 0;
  std::size_t rows = 0;
  int columns = 0;
  double b_norm = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  // Lower bound on the residual of *any* velocity field on this node set
  // (per-node least squares over the pointwise degrees of freedom).
  double pointwise_bound_abs = 0.0;
  double pointwise_bound_rel = 0.0;
  int rank = 0;
  double condition_estimate = 0.0;
  bool rank_deficient = false;
  std::string solver;
};

// The assembled linear system A c = b in normal-equation form, together with
// everything needed to re-stream exact residuals. Rows are ordered pair-major:
// for each usable grid pair, one row per state, each scaled by sqrt(w_pair).
class FeasibilitySystem {
 public:
  FeasibilitySystem(std::vector<BlochTwoQubit> states, int degree, FeasibilityOptions opt);

  const MatX& gram() const { return gram_; }
  const VecX& rhs() const { return rhs_; }
  double b_norm() const { return std::sqrt(b_norm2_); }
  std::size_t rows() const; // number of (pair, state) rows
  int columns() const { return basis_.size(); }
  const ProductVelocityBasis& basis() const { return basis_; }
  const ProductGrid& grid() const { return grid_; }
  const FeasibilityOptions& options() const { return opt_; }
  const std::vector<BlochTwoQubit>& states() const { return states_; }

  // Exact ||A c - b||_2 by streaming all rows.
  double residual(const VecX& coeffs) const;

  // One unscaled row: continuity residual d_t p + grad p . V + p div V at a
  // usable pair for one state (independent check path uses basis.evaluate).
  double row_value(const VecX& coeffs, std::size_t usable_pair_index, int state_index) const;

  // Dense materialization (small systems / tests): row-major pair-major order.
  void materialize(MatX& a, VecX& b) const;

  double pointwise_bound() const { return pointwise_bound_; }

 private:
  void assemble();

  std::vector<BlochTwoQubit> states_;
  FeasibilityOptions opt_;
  ProductVelocityBasis basis_;
  ProductGrid grid_;
  SphereNodeTables tables1_, tables2_;
  std::vector<DensityTimeDerivative> ddt_;
  MatX gram_;
  VecX rhs_;   // A^T b
  double b_norm2_ = 0.0;
  double pointwise_bound_ = 0.0;
};

struct FitResult {
  VecX coefficients;
  FeasibilityReport report;
};

// Minimum-norm least-squares solve of an explicit system A c = b through the
// same normal-equation machinery used by the feasibility fits. The report
// carries residuals and solver diagnostics (rank, conditioning, deficiency).
FitResult fit_velocity_field(const MatX& a, const VecX& b,
                             const FeasibilityOptions& opt = FeasibilityOptions{});

FitResult fit_velocity_field(const FeasibilitySystem& system);

// Convenience wrapper: assemble + fit.
FitResult fit_velocity_field(const std::vector<BlochTwoQubit>& states, int degree,
                             const FeasibilityOptions& opt);

// ---------------------------------------------------------------------------
// Single-qubit positive control: H = (omega/2) sigma_z, densities p_{r(t)} with
// r(t) rotating rigidly about z. The analytic solution is V = omega z x lambda.
// ---------------------------------------------------------------------------

class SingleQubitFeasibility {
 public:
  SingleQubitFeasibility(std::vector<Vec3> bloch_samples, int degree, FeasibilityOptions opt);

  const SingleVelocityBasis& basis() const { return basis_; }
  const SingleGrid& grid() const { return grid_; }
  double b_norm() const { return std::sqrt(b_norm2_); }
  int columns() const { return basis_.size(); }

  double residual(const VecX& coeffs) const;
  FitResult fit() const;

  // Max pointwise continuity residual |d_t p + grad p . V + p div V| over
  // usable nodes and samples for an arbitrary tangential field; the field's
  // divergence is computed with the finite-difference route.
  double max_pointwise_residual(const std::function<Vec3(const Vec3&)>& field) const;

 private:
  std::vector<Vec3> samples_;
  FeasibilityOptions opt_;
  SingleVelocityBasis basis_;
  SingleGrid grid_;
  SphereNodeTables tables_;
  MatX gram_;
  VecX rhs_;
  double b_norm2_ = 0.0;
};

FeasibilityReport single_qubit_control(double omega, const std::vector<Vec3>& bloch_samples,
                                       int n_theta, int n_phi, int degree,
                                       double kink_radius = 1e-3);

// ---------------------------------------------------------------------------
// Numerical echo of the closing argument: the fitted field, forced through the
// constraint stages derived from the analytic state families, must vanish away
// from lambda_1 . lambda_2 in {-1, 0, 1}.
// ---------------------------------------------------------------------------

struct ChainCheckReport {
  double max_divergence = 0.0;     // stage (i)
  double max_cross_normal = 0.0;   // stage (ii): |V_j . lambda_{3-j}|
  double max_noncollinear = 0.0;   // stage (iii): component off lambda_1 x lambda_2
  double max_field_norm = 0.0;     // stage (iv): ||V_j|| off the excluded set
  double max_forced_norm = 0.0;    // field after pointwise forcing of (i)-(iii)
  std::size_t nodes_checked = 0;
};

// Field values of a coefficient vector on the usable pairs of a grid.
TangentField evaluate_on_grid(const ProductVelocityBasis& basis, const VecX& coeffs,
                              const ProductGrid& grid);

ChainCheckReport analytic_chain_check(const TangentField& field, const ProductGrid& grid,
                                      double exclusion_radius = 1e-3);

ChainCheckReport analytic_chain_check(const ProductVelocityBasis& basis, const VecX& coeffs,
                                      const ProductGrid& grid, double exclusion_radius = 1e-3);

// Pointwise forcing helper (exposed for tests): nearest (v1, v2) on the
// constraint set {v1 v2 + v_j^2 c = 0, j = 1, 2} for c = lambda_1 . lambda_2.
std::pair<double, double> force_chain_scalars(double v1, double v2, double c, double tol = 1e-9);

} // namespace lhv::dynamics
