#include "lhv/sph.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv::sph {

namespace {

// Normalized associated Legendre values N_l^m(u) for one m-column, l = m..l_max.
// Recurrences in fully normalized form; stable up to degrees far beyond the
// l <= ~16 used in this project.
void legendre_column(int l_max, int m, double u, double sin_theta, std::vector<double>& out) {
  out.assign(l_max + 1 - m, 0.0);
  double pmm = std::sqrt(1.0 / kFourPi);
  for (int k = 1; k <= m; ++k)
    pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta;
  out[0] = pmm;
  if (l_max == m) return;
  double pm1 = u * std::sqrt(2.0 * m + 3.0) * pmm;
  out[1] = pm1;
  double pm2 = pmm;
  for (int l = m + 2; l <= l_max; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
    const double b =
        std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * double(l - 1) * (l - 1) - 1.0));
    const double pl = a * (u * pm1 - b * pm2);
    out[l - m] = pl;
    pm2 = pm1;
    pm1 = pl;
  }
}

// d/dtheta of the normalized column, via
//   dN_l^m/dtheta = (l u N_l^m - e_l^m N_{l-1}^m) / sin(theta),
//   e_l^m = sqrt((2l+1)(l^2-m^2)/(2l-1)).
void legendre_column_dtheta(int l_max, int m, double u, double sin_theta,
                            const std::vector<double>& vals, std::vector<double>& out) {
  out.assign(l_max + 1 - m, 0.0);
  for (int l = m; l <= l_max; ++l) {
    const double nl = vals[l - m];
    const double nlm1 = (l > m) ? vals[l - 1 - m] : 0.0;
    const double e = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0));
    out[l - m] = (l * u * nl - e * nlm1) / sin_theta;
  }
}

} // namespace

VecX real_harmonics(int l_max, const Vec3& n) {
  const double u = n[2];
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - u * u));
  const double phi = std::atan2(n[1], n[0]);

  VecX y(basis_size(l_max));
  std::vector<double> col;
  const double sqrt2 = std::sqrt(2.0);
  for (int m = 0; m <= l_max; ++m) {
    legendre_column(l_max, m, u, sin_theta, col);
    if (m == 0) {
      for (int l = 0; l <= l_max; ++l) y[basis_index(l, 0)] = col[l];
    } else {
      const double c = sqrt2 * std::cos(m * phi);
      const double s = sqrt2 * std::sin(m * phi);
      for (int l = m; l <= l_max; ++l) {
        y[basis_index(l, m)] = col[l - m] * c;
        y[basis_index(l, -m)] = col[l - m] * s;
      }
    }
  }
  return y;
}

void real_harmonics_with_gradients(int l_max, const Vec3& n, VecX& values, MatX& grad) {
  const double u = n[2];
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - u * u));
  if (sin_theta < 1e-9)
    throw std::domain_error("harmonic gradients are not evaluated at the poles");
  const double phi = std::atan2(n[1], n[0]);
  const double cos_phi = std::cos(phi), sin_phi = std::sin(phi);

  const Vec3 theta_hat(u * cos_phi, u * sin_phi, -sin_theta);
  const Vec3 phi_hat(-sin_phi, cos_phi, 0.0);

  const int k = basis_size(l_max);
  values.resize(k);
  grad.resize(k, 3);

  std::vector<double> col, dcol;
  const double sqrt2 = std::sqrt(2.0);
  for (int m = 0; m <= l_max; ++m) {
    legendre_column(l_max, m, u, sin_theta, col);
    legendre_column_dtheta(l_max, m, u, sin_theta, col, dcol);
    if (m == 0) {
      for (int l = 0; l <= l_max; ++l) {
        values[basis_index(l, 0)] = col[l];
        grad.row(basis_index(l, 0)) = dcol[l] * theta_hat;
      }
    } else {
      const double c = sqrt2 * std::cos(m * phi);
      const double s = sqrt2 * std::sin(m * phi);
      for (int l = m; l <= l_max; ++l) {
        const int ip = basis_index(l, m);
        const int im = basis_index(l, -m);
        values[ip] = col[l - m] * c;
        values[im] = col[l - m] * s;
        // phi-part: (1/sin theta) dY/dphi
        const double az = col[l - m] * m / sin_theta;
        grad.row(ip) = dcol[l - m] * c * theta_hat - az * s * phi_hat;
        grad.row(im) = dcol[l - m] * s * theta_hat + az * c * phi_hat;
      }
    }
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

SphereGrid sphere_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("sphere_grid needs positive sizes");
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  std::vector<double> u, w;
  gauss_legendre(n_theta, u, w);
  const double wphi = 2.0 * kPi / n_phi;
  g.nodes.reserve(std::size_t(n_theta) * n_phi);
  g.weights.reserve(std::size_t(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * 2.0 * kPi / n_phi;
      g.nodes.emplace_back(s * std::cos(phi), s * std::sin(phi), u[i]);
      g.weights.push_back(w[i] * wphi);
    }
  }
  return g;
}

SphereGrid sphere_grid_for_order(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  const int n_theta = order / 2 + 1; // exact for u-polynomials through degree order
  const int n_phi = order + 1;      // no aliasing for azimuthal orders <= order
  return sphere_grid(n_theta, n_phi);
}

} // namespace lhv::sph
