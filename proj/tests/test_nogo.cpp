#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhv/nogo.hpp"

using namespace lhv::nogo;

TEST_CASE("dim_projective_unitary: small cases and big-integer exactness") {
  CHECK(dim_projective_unitary(2, 1) == 3);
  CHECK(dim_projective_unitary(2, 2) == 15);
  CHECK(dim_projective_unitary(3, 3) == 728);
  // D = 2, N = 64: 2^128 - 1 must be exact.
  CHECK(dim_projective_unitary(2, 64).str() == "340282366920938463463374607431768211455");
  CHECK_THROWS_AS(dim_projective_unitary(1, 1), std::invalid_argument);
}

TEST_CASE("dim_separable_unitary scales linearly in the particle number") {
  CHECK(dim_separable_unitary(2, 1) == 3);
  CHECK(dim_separable_unitary(2, 6) == 18);
  CHECK(dim_separable_unitary(3, 3) == 24);
}

TEST_CASE("iso_dim_bound") {
  CHECK(iso_dim_bound(2) == 3);
  CHECK(iso_dim_bound(0) == 0);
  CHECK(iso_dim_bound(120) == 7260);
  CHECK_THROWS_AS(iso_dim_bound(-1), std::invalid_argument);
}

TEST_CASE("max_particles reproduces the headline crossing points") {
  CHECK(max_particles(2, 2) == 1);
  CHECK(max_particles(2, 20) == 6);
  CHECK(max_particles(3, 20) == 3);
}

TEST_CASE("max_particles is monotone in both arguments") {
  for (int d = 1; d <= 40; ++d) CHECK(max_particles(2, d + 1) >= max_particles(2, d));
  for (int dq = 2; dq <= 6; ++dq) CHECK(max_particles(dq + 1, 20) <= max_particles(dq, 20));
}

TEST_CASE("growth contrast: the quantum side eventually dwarfs the LHV side") {
  BigInt prev_qm = 0, prev_lhv = 1;
  for (int n = 4; n <= 64; n *= 2) {
    const BigInt qm = dim_projective_unitary(2, n);
    const BigInt lhv = iso_dim_bound(BigInt(n) * 20);
    CHECK(qm * prev_lhv > prev_qm * lhv); // the ratio B_QM / B_LHV strictly grows
    prev_qm = qm;
    prev_lhv = lhv;
  }
  CHECK(prev_qm > prev_lhv * BigInt("1000000000000000000000000000000"));
}

TEST_CASE("two qubits need a single-particle hidden dimension of at least 3") {
  CHECK_FALSE(constraint_feasible(2, 2, 2));
  CHECK(constraint_feasible(2, 2, 3));
}

TEST_CASE("relaxed kernel dimension loosens the constraint") {
  // D = 2, N = 2 is infeasible for d = 2 but becomes feasible after removing
  // a 5-dimensional kernel from the group side: 15 - 5 <= 10.
  CHECK_FALSE(constraint_feasible(2, 2, 2));
  CHECK(constraint_feasible(2, 2, 2, 5));
}

TEST_CASE("constraint_table rows match independent arithmetic") {
  const auto rows = constraint_table({2}, {2, 20}, 7);
  bool saw_d2_n2 = false, saw_d20_n7 = false, saw_d20_n6 = false;
  for (const auto& row : rows) {
    CHECK(row.b_qm == dim_projective_unitary(row.d_qudit, row.n_particles));
    CHECK(row.b_lhv == iso_dim_bound(BigInt(row.n_particles) * row.d_hidden));
    CHECK(row.feasible == (row.b_qm <= row.b_lhv));
    if (row.d_hidden == 2 && row.n_particles == 2) {
      CHECK(row.b_qm == 15);
      CHECK(row.b_lhv == 10);
      CHECK_FALSE(row.feasible);
      saw_d2_n2 = true;
    }
    if (row.d_hidden == 20 && row.n_particles == 7) {
      CHECK(row.b_qm == 16383);
      CHECK(row.b_lhv == 9870);
      CHECK_FALSE(row.feasible);
      saw_d20_n7 = true;
    }
    if (row.d_hidden == 20 && row.n_particles == 6) {
      CHECK(row.b_qm == 4095);
      CHECK(row.b_lhv == 7260);
      CHECK(row.feasible);
      saw_d20_n6 = true;
    }
  }
  CHECK(saw_d2_n2);
  CHECK(saw_d20_n7);
  CHECK(saw_d20_n6);
  CHECK_THROWS_AS(constraint_table({}, {2}, 3), std::invalid_argument);
}
