#pragma once

#include "lhv/linalg.hpp"
#include "lhv/quantum.hpp"
#include "lhv/rng.hpp"
#include "lhv/sph.hpp"

#include <array>
#include <vector>

namespace lhv::bell {

using quantum::BlochTwoQubit;
using quantum::Outcome;
using quantum::SingularData;

// A point of the two-particle hidden-variable space S^2 x S^2.
struct HiddenPoint {
  Vec3 l1;
  Vec3 l2;
};

// Heaviside step with the symmetric boundary convention Theta(0) = 1/2.
inline double theta(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }

// Ramp R(x) = x Theta(x).
inline double ramp(double x) { return x > 0.0 ? x : 0.0; }

// Outcome rule of the Bell model: q(up | n, lambda) = Theta(n . lambda).
double bell_rule(const Vec3& n, const Vec3& lambda, Outcome o);

// Single-qubit hidden-variable density, 4 pi p_r(lambda) = 4 R(r . lambda) + 1 - ||r||.
double single_qubit_density(const Vec3& r, const Vec3& lambda);

// ||a|| + ||b|| + sum_j S_j <= 1 (+1e-12), the domain of the closed-form
// two-qubit construction.
bool validity(const BlochTwoQubit& s);

// Two-qubit hidden-variable density with the state's SVD cached:
//   (4 pi)^2 p = 1 - a - b - sum S_j + 4 R(a.l1) + 4 R(b.l2)
//                + 8 sum_j S_j R((u_j.l1)(v_j.l2)).
// Construction requires validity(s); the constructor throws otherwise. The
// model itself is known to describe states beyond this closed-form domain
// (e.g. Werner states up to visibility ~0.5, via fitted densities); only the
// closed form is implemented here.
class TwoQubitLhvDensity {
 public:
  explicit TwoQubitLhvDensity(const BlochTwoQubit& s);
  TwoQubitLhvDensity(const Vec3& a, const Vec3& b, const SingularData& svd);

  double value(const Vec3& l1, const Vec3& l2) const;
  double value(const HiddenPoint& p) const { return value(p.l1, p.l2); }

  // Ambient gradients of the closed form w.r.t. l1 and l2 (not yet projected).
  void ambient_gradient(const Vec3& l1, const Vec3& l2, Vec3& g1, Vec3& g2) const;

  const BlochTwoQubit& state() const { return state_; }
  const SingularData& svd() const { return svd_; }

 private:
  BlochTwoQubit state_;
  SingularData svd_;
  double constant_ = 0.0; // 1 - a - b - sum S_j
  double norm_a_ = 0.0;
  double norm_b_ = 0.0;
};

double two_qubit_density(const BlochTwoQubit& s, const HiddenPoint& p);

// Quadrature nodes and weights over S^2 (weights sum to 4 pi).
using SphereQuadrature = sph::SphereGrid;

// Quadrature exact for spherical harmonics of degree 1..order.
SphereQuadrature sphere_quadrature(int order);

inline Vec3 sample_sphere(rng::Engine& eng) { return rng::unit_vector(eng); }

enum class IntegratorMode { MonteCarlo, ProductQuadrature };

struct IntegratorConfig {
  IntegratorMode mode = IntegratorMode::MonteCarlo;
  std::uint64_t seed = 1;
  std::size_t mc_samples = 1'000'000;   // initial sample count
  std::size_t mc_max_samples = 16'000'000;
  int quad_n_theta = 64;                // per-sphere baseline, doubled on refinement
  int quad_n_phi = 128;
  int quad_refinements = 1;
  double tolerance = 5e-3;
  // Monte Carlo stops early once 3.5 standard errors fall below tolerance.
  double confidence_sigmas = 3.5;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;        // standard error (MC) or refinement difference (quadrature)
  std::size_t evaluations = 0;
  bool converged = true;
};

// P(m) = integral p(l1, l2) q(m1 | l1) q(m2 | l2) dl1 dl2.
// Throws std::runtime_error if the budget is exhausted before the requested
// tolerance is met.
Estimate lhv_probability(const TwoQubitLhvDensity& density, const quantum::MeasurementEvent& m,
                         const IntegratorConfig& config);

// All four outcome probabilities of every setting pair, sharing one sample
// stream / one grid pass per state. Row layout: [setting][outcome1*2+outcome2]
// with outcome index 0 = Up, 1 = Down.
struct SettingPair {
  Vec3 n1;
  Vec3 n2;
};

std::vector<std::array<Estimate, 4>> lhv_joint_table(const TwoQubitLhvDensity& density,
                                                     const std::vector<SettingPair>& settings,
                                                     const IntegratorConfig& config);

// Quantum-side closed form for the same table (via quantum_probability).
std::array<double, 4> quantum_joint_row(const BlochTwoQubit& s, const SettingPair& setting);

} // namespace lhv::bell
