#pragma once

#include "lhv/linalg.hpp"
#include "lhv/sph.hpp"

#include <vector>

namespace lhv::dynamics {

// Tangential vector-spherical-harmonic data at a set of sphere nodes.
// For each harmonic index k with degree l >= 1:
//   psi_k = grad_{S^2} Y_k / sqrt(l(l+1))        (gradient type, div = -sqrt(l(l+1)) Y_k)
//   phi_k = lambda x psi_k                        (curl type, divergence-free)
// Both families are orthonormal in L^2(S^2)^3.
struct SphereNodeTables {
  int l_max = 0;
  MatX values;              // node x K scalar harmonics
  std::vector<MatX> psi;    // per node: K x 3 (rows 0..l_max^2.. valid for l >= 1)
  std::vector<MatX> phi;    // per node: K x 3
  VecX div_coeff;           // K; div of psi_k = div_coeff[k] * Y_k

  void build(int l_max, const std::vector<Vec3>& nodes);
};

// Basis of tangential velocity fields on S^2 x S^2:
//   V1(l1, l2) = [psi or phi]_{l,m}(l1) * Y_{l',m'}(l2),  and symmetrically V2.
// Truncation: total degree l + l' <= L by default ("total"); the full tensor
// product l <= L, l' <= L is available as an alternative ("tensor"). Both are
// nested in L, which keeps least-squares residuals monotone under refinement.
class ProductVelocityBasis {
 public:
  enum class Truncation { TotalDegree, TensorProduct };

  struct Entry {
    int sphere;   // 0: vector part on sphere 1, 1: on sphere 2
    int type;     // 0: gradient type, 1: curl type
    int l, m;     // vector harmonic (l >= 1)
    int lp, mp;   // partner scalar harmonic
  };

  ProductVelocityBasis(int degree, Truncation trunc = Truncation::TotalDegree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }

  // Rows of m: 0..2 velocity on sphere 1, 3..5 on sphere 2, 6 total divergence.
  // Tables must be built with l_max >= degree.
  void fill_node_matrix(const SphereNodeTables& t1, int i1, const SphereNodeTables& t2, int i2,
                        Eigen::Ref<MatX> m) const;

  // Direct evaluation at arbitrary points (independent of fill_node_matrix).
  void evaluate(const VecX& coeffs, const Vec3& l1, const Vec3& l2, Vec3& v1, Vec3& v2,
                double& divergence) const;

  // Coefficient indices of this basis inside the same-truncation basis of a
  // larger degree (the bases are nested).
  std::vector<int> embedding_into(const ProductVelocityBasis& larger) const;

 private:
  int degree_;
  Truncation trunc_;
  std::vector<Entry> entries_;
};

// Tangential velocity basis on a single sphere (degrees 1..L, both types).
class SingleVelocityBasis {
 public:
  struct Entry {
    int type;
    int l, m;
  };

  explicit SingleVelocityBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }

  // Rows of m: 0..2 velocity, 3 divergence.
  void fill_node_matrix(const SphereNodeTables& t, int i, Eigen::Ref<MatX> m) const;

  void evaluate(const VecX& coeffs, const Vec3& lambda, Vec3& v, double& divergence) const;

 private:
  int degree_;
  std::vector<Entry> entries_;
};

} // namespace lhv::dynamics
