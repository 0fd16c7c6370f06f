#pragma once

#include "lhv/linalg.hpp"
#include "lhv/sph.hpp"

namespace lhv::universal {

// Real spherical-harmonic basis for the softmax measurement rule.
// K = (l_max + 1)^2 functions ordered as (0,0), (1,-1), (1,0), (1,1), ...
struct BasisSpec {
  int l_max = 5;

  int size() const { return sph::basis_size(l_max); }
  int index(int l, int m) const { return sph::basis_index(l, m); }
};

// Matrix-valued hidden variable of the softmax model: one row of logit
// coefficients per outcome.
struct MatrixHV {
  MatX coeffs; // Delta x K

  int outcomes() const { return static_cast<int>(coeffs.rows()); }
};

// Expansion coefficients of B(U[x]) in the same basis; block-diagonal in the
// harmonic degree because rotations do not mix degrees.
struct DMatrix {
  MatX d; // K x K
  int l_max = 0;

  MatX block(int l) const { return d.block(l * l, l * l, 2 * l + 1, 2 * l + 1); }
};

// B(n): values of the basis functions at measurement direction n.
VecX real_sph_basis(const BasisSpec& spec, const Vec3& n);

// Softmax outcome distribution q(n, lambda) = exp(lambda B(n)) / ||exp(.)||_1,
// guarded against overflow by max subtraction.
VecX softmax_rule(const MatrixHV& lambda, const Vec3& n, const BasisSpec& spec);

// SO(3) rotation with R n . sigma = U (n . sigma) U^dagger; insensitive to the
// global phase of U. Throws on non-unitary input.
Mat3 rotation_from_unitary(const Mat2c& u);

// D-matrix of the rotation R acting on directions: B(R n) = D B(n), computed by
// quadrature projection D_mn = sum_i w_i B_m(R x_i) B_n(x_i). The quadrature
// must be exact through degree 2 l_max (guard: order >= 2 l_max + 2).
DMatrix d_matrix_for_rotation(const Mat3& r, const BasisSpec& spec, int quad_order = -1);

// d_{U} for the unitary's rotation action on measurement directions.
DMatrix d_matrix(const Mat2c& u, const BasisSpec& spec, int quad_order = -1);

// Hidden-variable transformation T_U(lambda) = lambda d_{U^dagger}. Satisfies
// T_1 = Id and T_{U1 U2} = T_{U1} o T_{U2}.
MatrixHV transform_hv(const MatrixHV& lambda, const Mat2c& u, const BasisSpec& spec);

// Largest |entry| outside the degree-diagonal blocks (degree preservation).
double max_off_block(const DMatrix& dm);

} // namespace lhv::universal
