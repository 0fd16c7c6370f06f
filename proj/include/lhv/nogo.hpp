#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace lhv::nogo {

using BigInt = boost::multiprecision::cpp_int;

// dim PU(H) = D^{2N} - 1 for N qudits of dimension D.
BigInt dim_projective_unitary(int d_qudit, int n_particles);

// dim PU_0(H) = N (D^2 - 1) for separable (noninteracting) unitaries.
BigInt dim_separable_unitary(int d_qudit, int n_particles);

// Isometry-group bound dim Lambda (dim Lambda + 1) / 2.
BigInt iso_dim_bound(const BigInt& dim_lambda);

// The dimensionality constraint D^{2N} - 1 <= N d (N d + 1)/2, optionally
// relaxed by a kernel dimension on the left-hand side.
bool constraint_feasible(int d_qudit, int n_particles, int d_hidden, const BigInt& kernel_dim = 0);

// Largest N satisfying the constraint; 0 if even N = 1 fails. The scan stops
// once D^N > N d + 1, after which no larger N can be feasible.
int max_particles(int d_qudit, int d_hidden);

struct ConstraintRow {
  int d_qudit;
  int d_hidden;
  int n_particles;
  BigInt b_qm;
  BigInt b_lhv;
  bool feasible;
};

std::vector<ConstraintRow> constraint_table(const std::vector<int>& d_qudits,
                                            const std::vector<int>& d_hiddens, int n_max);

} // namespace lhv::nogo
