#include "lhv/universal.hpp"

#include "lhv/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv::universal {

VecX real_sph_basis(const BasisSpec& spec, const Vec3& n) {
  return sph::real_harmonics(spec.l_max, n);
}

VecX softmax_rule(const MatrixHV& lambda, const Vec3& n, const BasisSpec& spec) {
  if (lambda.coeffs.cols() != spec.size())
    throw std::invalid_argument("hidden-variable column count does not match basis size");
  VecX logits = lambda.coeffs * real_sph_basis(spec, n);
  logits.array() -= logits.maxCoeff();
  VecX q = logits.array().exp();
  return q / q.sum();
}

Mat3 rotation_from_unitary(const Mat2c& u) {
  if ((u * u.adjoint() - Mat2c::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("rotation_from_unitary expects a unitary matrix");
  Mat3 r;
  for (int j = 0; j < 3; ++j) {
    const Mat2c conj = u * quantum::pauli(j + 1) * u.adjoint();
    for (int i = 0; i < 3; ++i) r(i, j) = 0.5 * (quantum::pauli(i + 1) * conj).trace().real();
  }
  return r;
}

DMatrix d_matrix_for_rotation(const Mat3& r, const BasisSpec& spec, int quad_order) {
  const int k = spec.size();
  // The group identity is represented exactly.
  if (r.isIdentity(0.0)) return DMatrix{MatX::Identity(k, k), spec.l_max};

  if (quad_order < 0) quad_order = 2 * spec.l_max + 4;
  if (quad_order < 2 * spec.l_max + 2)
    throw std::invalid_argument("quadrature order insufficient for this l_max");

  const auto grid = sph::sphere_grid_for_order(quad_order);
  MatX d = MatX::Zero(k, k);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const VecX rotated = sph::real_harmonics(spec.l_max, r * grid.nodes[i]);
    const VecX plain = sph::real_harmonics(spec.l_max, grid.nodes[i]);
    d.noalias() += grid.weights[i] * rotated * plain.transpose();
  }
  return DMatrix{std::move(d), spec.l_max};
}

DMatrix d_matrix(const Mat2c& u, const BasisSpec& spec, int quad_order) {
  return d_matrix_for_rotation(rotation_from_unitary(u), spec, quad_order);
}

MatrixHV transform_hv(const MatrixHV& lambda, const Mat2c& u, const BasisSpec& spec) {
  const DMatrix d = d_matrix(u.adjoint(), spec);
  return MatrixHV{lambda.coeffs * d.d};
}

double max_off_block(const DMatrix& dm) {
  const int k = static_cast<int>(dm.d.rows());
  MatX masked = dm.d;
  for (int l = 0; l <= dm.l_max; ++l)
    masked.block(l * l, l * l, 2 * l + 1, 2 * l + 1).setZero();
  return k == 0 ? 0.0 : masked.cwiseAbs().maxCoeff();
}

} // namespace lhv::universal
