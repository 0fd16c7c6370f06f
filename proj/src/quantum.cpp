#include "lhv/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <sstream>
#include <stdexcept>

namespace lhv::quantum {

namespace {

const complexd kI(0.0, 1.0);

Mat2c make_pauli(int k) {
  Mat2c m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli index out of range");
  }
  return m;
}

Mat4c kron2(const Mat2c& x, const Mat2c& y) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
  return out;
}

} // namespace

const Mat2c& pauli(int k) {
  static const Mat2c table[4] = {make_pauli(0), make_pauli(1), make_pauli(2), make_pauli(3)};
  if (k < 0 || k > 3) throw std::invalid_argument("pauli index out of range");
  return table[k];
}

bool DensityMatrix::is_valid(double herm_tol, double eig_tol) const {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > herm_tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > herm_tol || std::abs(rho.trace().imag()) > herm_tol)
    return false;
  Eigen::SelfAdjointEigenSolver<MatXc> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -eig_tol;
}

void DensityMatrix::require_valid() const {
  if (!is_valid()) {
    std::ostringstream msg;
    msg << "density matrix of dim " << dim() << " is not a valid state";
    throw std::domain_error(msg.str());
  }
}

SingularData singular_data(const Mat3& T) {
  Eigen::JacobiSVD<Mat3> svd(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SingularData out;
  out.S = svd.singularValues();
  out.U = svd.matrixU();
  out.V = svd.matrixV();
  return out;
}

DensityMatrix density_from_bloch(const BlochTwoQubit& s) {
  Mat4c rho = kron2(pauli(0), pauli(0));
  for (int j = 0; j < 3; ++j) {
    rho += s.a[j] * kron2(pauli(j + 1), pauli(0));
    rho += s.b[j] * kron2(pauli(0), pauli(j + 1));
    for (int k = 0; k < 3; ++k) rho += s.T(j, k) * kron2(pauli(j + 1), pauli(k + 1));
  }
  return DensityMatrix{0.25 * rho};
}

DensityMatrix density_from_bloch(const Vec3& r) {
  Mat2c rho = pauli(0);
  for (int j = 0; j < 3; ++j) rho += r[j] * pauli(j + 1);
  return DensityMatrix{0.5 * rho};
}

BlochTwoQubit bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("bloch_from_density expects a two-qubit state");
  const Mat4c& m = rho.rho;
  BlochTwoQubit s;
  for (int j = 0; j < 3; ++j) {
    s.a[j] = (m * kron2(pauli(j + 1), pauli(0))).trace().real();
    s.b[j] = (m * kron2(pauli(0), pauli(j + 1))).trace().real();
    for (int k = 0; k < 3; ++k)
      s.T(j, k) = (m * kron2(pauli(j + 1), pauli(k + 1))).trace().real();
  }
  return s;
}

Mat2c spin_projector(const Vec3& n, Outcome o) {
  Mat2c proj = pauli(0);
  const double sign = outcome_sign(o);
  for (int j = 0; j < 3; ++j) proj += sign * n[j] * pauli(j + 1);
  return 0.5 * proj;
}

double quantum_probability(const DensityMatrix& rho, const MeasurementEvent& m) {
  for (const auto& p : m.parties) {
    if (std::abs(p.direction.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("measurement direction is not a unit vector");
  }
  if (m.parties.size() == 1 && rho.dim() == 2) {
    const Mat2c proj = spin_projector(m.parties[0].direction, m.parties[0].outcome);
    return (rho.rho * proj).trace().real();
  }
  if (m.parties.size() == 2 && rho.dim() == 4) {
    const Mat4c proj = kron2(spin_projector(m.parties[0].direction, m.parties[0].outcome),
                             spin_projector(m.parties[1].direction, m.parties[1].outcome));
    return (rho.rho * proj).trace().real();
  }
  throw std::invalid_argument("event party count does not match state dimension");
}

Mat4c heisenberg_unitary(double omega, double t) {
  Mat4c h = Mat4c::Zero();
  for (int k = 1; k <= 3; ++k) h += kron2(pauli(k), pauli(k));
  h *= omega / 4.0;
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h);
  const Eigen::Vector4d ev = es.eigenvalues();
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases[i] = std::exp(-kI * ev[i] * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

BlochTwoQubit evolve_bloch(const BlochTwoQubit& s, double omega, double t) {
  const Mat4c u = heisenberg_unitary(omega, t);
  DensityMatrix rho = density_from_bloch(s);
  rho.rho = u * rho.rho * u.adjoint();
  return bloch_from_density(rho);
}

BlochDerivatives bloch_derivatives(const BlochTwoQubit& s, double omega) {
  BlochDerivatives d;
  d.adot = omega * z_of_antisym(0.5 * (s.T - s.T.transpose()));
  d.bdot = -d.adot;
  d.Tdot = -omega * antisym_of_vec(0.5 * (s.a - s.b));
  return d;
}

Vec3 z_of_antisym(const Mat3& A) {
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("z_of_antisym: matrix is not antisymmetric");
  return {A(2, 1), A(0, 2), A(1, 0)};
}

Mat3 antisym_of_vec(const Vec3& z) {
  Mat3 a;
  a << 0, -z[2], z[1], z[2], 0, -z[0], -z[1], z[0], 0;
  return a;
}

BlochTwoQubit sample_noisy_ball(double v, rng::Engine& eng) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("visibility must lie in [0, 1]");
  Mat4c g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = complexd(rng::normal(eng), rng::normal(eng));
  Mat4c w = g * g.adjoint();
  w /= w.trace().real();
  const Mat4c mixed = v * w + (1.0 - v) * 0.25 * Mat4c::Identity();
  return bloch_from_density(DensityMatrix{mixed});
}

} // namespace lhv::quantum
