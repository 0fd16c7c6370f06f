#include "lhv/nogo.hpp"

#include <stdexcept>

namespace lhv::nogo {

namespace {

void check_args(int d_qudit, int n_particles) {
  if (d_qudit < 2) throw std::invalid_argument("qudit dimension must be >= 2");
  if (n_particles < 1) throw std::invalid_argument("particle count must be >= 1");
}

BigInt ipow(int base, int exp) {
  BigInt out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

} // namespace

BigInt dim_projective_unitary(int d_qudit, int n_particles) {
  check_args(d_qudit, n_particles);
  return ipow(d_qudit, 2 * n_particles) - 1;
}

BigInt dim_separable_unitary(int d_qudit, int n_particles) {
  check_args(d_qudit, n_particles);
  return BigInt(n_particles) * (BigInt(d_qudit) * d_qudit - 1);
}

BigInt iso_dim_bound(const BigInt& dim_lambda) {
  if (dim_lambda < 0) throw std::invalid_argument("dimension must be >= 0");
  return dim_lambda * (dim_lambda + 1) / 2;
}

bool constraint_feasible(int d_qudit, int n_particles, int d_hidden, const BigInt& kernel_dim) {
  check_args(d_qudit, n_particles);
  if (d_hidden < 1) throw std::invalid_argument("hidden-variable dimension must be >= 1");
  const BigInt lhs = dim_projective_unitary(d_qudit, n_particles) - kernel_dim;
  return lhs <= iso_dim_bound(BigInt(n_particles) * d_hidden);
}

int max_particles(int d_qudit, int d_hidden) {
  if (d_qudit < 2) throw std::invalid_argument("qudit dimension must be >= 2");
  if (d_hidden < 1) throw std::invalid_argument("hidden-variable dimension must be >= 1");
  int best = 0;
  // Feasibility requires D^N <= N d + 1; once that fails it fails for all
  // larger N (the ratio D^N / (N d + 1) is nondecreasing from N = 1 on).
  for (int n = 1;; ++n) {
    if (constraint_feasible(d_qudit, n, d_hidden)) best = n;
    if (ipow(d_qudit, n) > BigInt(n) * d_hidden + 1) break;
  }
  return best;
}

std::vector<ConstraintRow> constraint_table(const std::vector<int>& d_qudits,
                                            const std::vector<int>& d_hiddens, int n_max) {
  if (d_qudits.empty() || d_hiddens.empty())
    throw std::invalid_argument("constraint_table needs nonempty dimension lists");
  std::vector<ConstraintRow> rows;
  for (int dq : d_qudits)
    for (int dh : d_hiddens)
      for (int n = 1; n <= n_max; ++n) {
        ConstraintRow row;
        row.d_qudit = dq;
        row.d_hidden = dh;
        row.n_particles = n;
        row.b_qm = dim_projective_unitary(dq, n);
        row.b_lhv = iso_dim_bound(BigInt(n) * dh);
        row.feasible = row.b_qm <= row.b_lhv;
        rows.push_back(std::move(row));
      }
  return rows;
}

} // namespace lhv::nogo
