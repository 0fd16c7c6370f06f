#pragma once

#include "lhv/linalg.hpp"

#include <vector>

namespace lhv::sph {

// Real orthonormal spherical harmonics, Condon-Shortley-free, packed in the
// order n = l^2 + l + m for l = 0..l_max, m = -l..l:
//   Y_{l,0}  = N_l^0(cos theta)
//   Y_{l,m}  = sqrt(2) N_l^m(cos theta) cos(m phi)   (m > 0)
//   Y_{l,-m} = sqrt(2) N_l^m(cos theta) sin(m phi)   (m > 0)
// with N_l^m the orthonormalized associated Legendre functions, so that the
// Gram matrix over the sphere is the identity.

inline int basis_size(int l_max) { return (l_max + 1) * (l_max + 1); }
inline int basis_index(int l, int m) { return l * l + l + m; }

// Values of all harmonics with degree <= l_max at the unit vector n.
VecX real_harmonics(int l_max, const Vec3& n);

// Values plus ambient-coordinate surface gradients (rows of grad are the
// tangential gradient vectors grad_{S^2} Y_n). Not usable at the poles
// (|sin theta| must exceed ~1e-9); quadrature nodes never sit there.
void real_harmonics_with_gradients(int l_max, const Vec3& n, VecX& values, MatX& grad);

// Gauss-Legendre nodes/weights on [-1, 1], exact for polynomials of degree
// 2n - 1. Newton iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Product quadrature grid on S^2: Gauss-Legendre in cos(theta) x uniform
// azimuth. weights sum to 4 pi; integrates spherical harmonics of degree
// 1..order to machine precision (and degree-0 exactly).
struct SphereGrid {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  int n_theta = 0;
  int n_phi = 0;

  std::size_t size() const { return nodes.size(); }
};

SphereGrid sphere_grid(int n_theta, int n_phi);

// Smallest grid whose product quadrature is exact through harmonic degree `order`.
SphereGrid sphere_grid_for_order(int order);

} // namespace lhv::sph
