#include "lhv/velocity_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv::dynamics {

void SphereNodeTables::build(int l_max_in, const std::vector<Vec3>& nodes) {
  l_max = l_max_in;
  const int k = sph::basis_size(l_max);
  const auto n = nodes.size();
  values.resize(n, k);
  psi.assign(n, MatX::Zero(k, 3));
  phi.assign(n, MatX::Zero(k, 3));
  div_coeff = VecX::Zero(k);
  for (int l = 1; l <= l_max; ++l) {
    const double s = std::sqrt(double(l) * (l + 1));
    for (int m = -l; m <= l; ++m) div_coeff[sph::basis_index(l, m)] = -s;
  }

  VecX vals;
  MatX grad;
  for (std::size_t i = 0; i < n; ++i) {
    sph::real_harmonics_with_gradients(l_max, nodes[i], vals, grad);
    values.row(i) = vals.transpose();
    for (int l = 1; l <= l_max; ++l) {
      const double inv = 1.0 / std::sqrt(double(l) * (l + 1));
      for (int m = -l; m <= l; ++m) {
        const int idx = sph::basis_index(l, m);
        const Vec3 p = inv * grad.row(idx).transpose();
        psi[i].row(idx) = p.transpose();
        phi[i].row(idx) = nodes[i].cross(p).transpose();
      }
    }
  }
}

ProductVelocityBasis::ProductVelocityBasis(int degree, Truncation trunc)
    : degree_(degree), trunc_(trunc) {
  if (degree < 1) throw std::invalid_argument("velocity basis degree must be >= 1");
  for (int sphere = 0; sphere < 2; ++sphere)
    for (int l = 1; l <= degree; ++l) {
      const int lp_max = (trunc == Truncation::TotalDegree) ? degree - l : degree;
      for (int m = -l; m <= l; ++m)
        for (int type = 0; type < 2; ++type)
          for (int lp = 0; lp <= lp_max; ++lp)
            for (int mp = -lp; mp <= lp; ++mp)
              entries_.push_back(Entry{sphere, type, l, m, lp, mp});
    }
}

void ProductVelocityBasis::fill_node_matrix(const SphereNodeTables& t1, int i1,
                                            const SphereNodeTables& t2, int i2,
                                            Eigen::Ref<MatX> m) const {
  m.setZero();
  for (int c = 0; c < size(); ++c) {
    const Entry& e = entries_[c];
    const int kv = sph::basis_index(e.l, e.m);
    const int ks = sph::basis_index(e.lp, e.mp);
    if (e.sphere == 0) {
      const MatX& vec = (e.type == 0) ? t1.psi[i1] : t1.phi[i1];
      const double scalar = t2.values(i2, ks);
      m.block<3, 1>(0, c) = scalar * vec.row(kv).transpose();
      if (e.type == 0) m(6, c) = t1.div_coeff[kv] * t1.values(i1, kv) * scalar;
    } else {
      const MatX& vec = (e.type == 0) ? t2.psi[i2] : t2.phi[i2];
      const double scalar = t1.values(i1, ks);
      m.block<3, 1>(3, c) = scalar * vec.row(kv).transpose();
      if (e.type == 0) m(6, c) = t2.div_coeff[kv] * t2.values(i2, kv) * scalar;
    }
  }
}

void ProductVelocityBasis::evaluate(const VecX& coeffs, const Vec3& l1, const Vec3& l2, Vec3& v1,
                                    Vec3& v2, double& divergence) const {
  if (coeffs.size() != size()) throw std::invalid_argument("coefficient count mismatch");
  SphereNodeTables t1, t2;
  t1.build(degree_, {l1});
  t2.build(degree_, {l2});
  MatX m(7, size());
  fill_node_matrix(t1, 0, t2, 0, m);
  const VecX row = m * coeffs;
  v1 = row.segment<3>(0);
  v2 = row.segment<3>(3);
  divergence = row[6];
}

std::vector<int> ProductVelocityBasis::embedding_into(const ProductVelocityBasis& larger) const {
  if (larger.trunc_ != trunc_ || larger.degree_ < degree_)
    throw std::invalid_argument("bases are not nested");
  std::vector<int> map(size(), -1);
  for (int c = 0; c < size(); ++c) {
    const Entry& e = entries_[c];
    for (int d = 0; d < larger.size(); ++d) {
      const Entry& f = larger.entries_[d];
      if (f.sphere == e.sphere && f.type == e.type && f.l == e.l && f.m == e.m && f.lp == e.lp &&
          f.mp == e.mp) {
        map[c] = d;
        break;
      }
    }
    if (map[c] < 0) throw std::logic_error("nested basis entry not found");
  }
  return map;
}

SingleVelocityBasis::SingleVelocityBasis(int degree) : degree_(degree) {
  if (degree < 1) throw std::invalid_argument("velocity basis degree must be >= 1");
  for (int l = 1; l <= degree; ++l)
    for (int m = -l; m <= l; ++m)
      for (int type = 0; type < 2; ++type) entries_.push_back(Entry{type, l, m});
}

void SingleVelocityBasis::fill_node_matrix(const SphereNodeTables& t, int i,
                                           Eigen::Ref<MatX> m) const {
  m.setZero();
  for (int c = 0; c < size(); ++c) {
    const Entry& e = entries_[c];
    const int kv = sph::basis_index(e.l, e.m);
    const MatX& vec = (e.type == 0) ? t.psi[i] : t.phi[i];
    m.block<3, 1>(0, c) = vec.row(kv).transpose();
    if (e.type == 0) m(3, c) = t.div_coeff[kv] * t.values(i, kv);
  }
}

void SingleVelocityBasis::evaluate(const VecX& coeffs, const Vec3& lambda, Vec3& v,
                                   double& divergence) const {
  if (coeffs.size() != size()) throw std::invalid_argument("coefficient count mismatch");
  SphereNodeTables t;
  t.build(degree_, {lambda});
  MatX m(4, size());
  fill_node_matrix(t, 0, m);
  const VecX row = m * coeffs;
  v = row.segment<3>(0);
  divergence = row[3];
}

} // namespace lhv::dynamics
