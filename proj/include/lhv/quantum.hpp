#pragma once

#include "lhv/linalg.hpp"
#include "lhv/rng.hpp"

#include <vector>

namespace lhv::quantum {

enum class Outcome { Up, Down };

inline double outcome_sign(Outcome o) { return o == Outcome::Up ? 1.0 : -1.0; }

// Density matrix of one or two qubits (dim 2 or 4).
struct DensityMatrix {
  MatXc rho;

  int dim() const { return static_cast<int>(rho.rows()); }

  // Hermiticity / unit trace / positivity check. Tolerances: 1e-12 for the
  // linear conditions, eigenvalues allowed down to -1e-10.
  bool is_valid(double herm_tol = 1e-12, double eig_tol = 1e-10) const;

  // Throws std::domain_error with a diagnostic if is_valid() fails.
  void require_valid() const;
};

// Two-qubit state in the Pauli product parameterization: local Bloch vectors
// a, b and the 3x3 correlation matrix T.
struct BlochTwoQubit {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  Mat3 T = Mat3::Zero();
};

// One measured direction and recorded outcome per party.
struct PartyMeasurement {
  Vec3 direction;
  Outcome outcome = Outcome::Up;
};

struct MeasurementEvent {
  std::vector<PartyMeasurement> parties;

  static MeasurementEvent single(const Vec3& n, Outcome o) { return {{{n, o}}}; }
  static MeasurementEvent pair(const Vec3& n1, Outcome o1, const Vec3& n2, Outcome o2) {
    return {{{n1, o1}, {n2, o2}}};
  }
};

// Singular value decomposition of a correlation matrix, T = sum_j S_j u_j v_j^T
// with S_j >= 0 and orthonormal triads {u_j}, {v_j}.
struct SingularData {
  Vec3 S = Vec3::Zero();
  Mat3 U = Mat3::Identity(); // columns are u_j
  Mat3 V = Mat3::Identity(); // columns are v_j

  Mat3 reconstruct() const { return U * S.asDiagonal() * V.transpose(); }
  double sum() const { return S.sum(); }
};

SingularData singular_data(const Mat3& T);

const Mat2c& pauli(int k); // k = 0 -> identity, 1..3 -> sigma_x,y,z

// rho(a, b, T) = (1/4)(1x1 + a.sigma x 1 + 1 x b.sigma + sum_jk T_jk sigma_j x sigma_k)
DensityMatrix density_from_bloch(const BlochTwoQubit& s);

// Single-qubit rho(r) = (1 + r.sigma)/2.
DensityMatrix density_from_bloch(const Vec3& r);

// Inverse of density_from_bloch via Pauli traces. Requires dim 4.
BlochTwoQubit bloch_from_density(const DensityMatrix& rho);

// Projector onto the outcome eigenspace of a spin measurement along n.
Mat2c spin_projector(const Vec3& n, Outcome o);

// P(m | rho) = Tr(rho x_k Pi(n_k, o_k)). Accepts 1- or 2-party events matching
// the dimension of rho.
double quantum_probability(const DensityMatrix& rho, const MeasurementEvent& m);

// U(t) = exp(-i H t) for the Heisenberg exchange H = (omega/4) sum_k sigma_k x sigma_k,
// computed by eigendecomposition of the Hermitian H.
Mat4c heisenberg_unitary(double omega, double t);

// Bloch data of U(t) rho U(t)^dagger.
BlochTwoQubit evolve_bloch(const BlochTwoQubit& s, double omega, double t);

struct BlochDerivatives {
  Vec3 adot;
  Vec3 bdot;
  Mat3 Tdot;
};

// Equations of motion at t = 0 under the Heisenberg exchange:
//   adot = -bdot = omega * z((T - T^T)/2),   Tdot = -omega * A((a - b)/2).
BlochDerivatives bloch_derivatives(const BlochTwoQubit& s, double omega);

// z(A) is the unique vector with z x v = A v for antisymmetric A; A(z) its inverse.
Vec3 z_of_antisym(const Mat3& A);
Mat3 antisym_of_vec(const Vec3& z);

// Draws rho from the normalized Wishart ensemble G G^dag / Tr(G G^dag) with
// complex standard-normal G, then mixes: v rho + (1 - v) * 1/4. Returns the
// Bloch data of the mixture.
BlochTwoQubit sample_noisy_ball(double v, rng::Engine& eng);

} // namespace lhv::quantum
