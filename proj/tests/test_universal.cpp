#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhv/quantum.hpp"
#include "lhv/universal.hpp"

using namespace lhv;
using namespace lhv::universal;

namespace {

Mat2c rotation_about(const Vec3& axis, double angle) {
  Mat2c gen = Mat2c::Zero();
  for (int j = 0; j < 3; ++j) gen += axis[j] * quantum::pauli(j + 1);
  const complexd i1(0.0, 1.0);
  return (std::cos(angle / 2) * Mat2c::Identity() - i1 * std::sin(angle / 2) * gen).eval();
}

} // namespace

TEST_CASE("gauss_legendre: nodes integrate polynomials exactly") {
  std::vector<double> x, w;
  sph::gauss_legendre(8, x, w);
  double total = 0.0, fourth = 0.0;
  for (int i = 0; i < 8; ++i) {
    total += w[i];
    fourth += w[i] * std::pow(x[i], 14);
  }
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fourth == doctest::Approx(2.0 / 15.0).epsilon(1e-13)); // integral of x^14 over [-1,1]
}

TEST_CASE("real_sph_basis: constant harmonic and axis values") {
  const BasisSpec spec{3};
  auto eng = rng::make_engine(1);
  for (int k = 0; k < 10; ++k) {
    const VecX y = real_sph_basis(spec, rng::unit_vector(eng));
    CHECK(y[0] == doctest::Approx(1.0 / std::sqrt(kFourPi)).epsilon(1e-14));
  }
  const VecX at_z = real_sph_basis(spec, Vec3::UnitZ());
  CHECK(at_z[spec.index(1, 0)] == doctest::Approx(std::sqrt(3.0 / kFourPi)).epsilon(1e-14));
  // Condon-Shortley-free: Y_{1,1} is positive along +x.
  const VecX at_x = real_sph_basis(spec, Vec3::UnitX());
  CHECK(at_x[spec.index(1, 1)] == doctest::Approx(std::sqrt(3.0 / kFourPi)).epsilon(1e-14));
  CHECK(at_x[spec.index(1, -1)] == doctest::Approx(0.0));
}

TEST_CASE("real_sph_basis: quadrature Gram matrix is the identity") {
  const BasisSpec spec{6};
  const auto grid = sph::sphere_grid_for_order(2 * spec.l_max + 2);
  MatX gram = MatX::Zero(spec.size(), spec.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const VecX y = real_sph_basis(spec, grid.nodes[i]);
    gram.noalias() += grid.weights[i] * y * y.transpose();
  }
  CHECK((gram - MatX::Identity(spec.size(), spec.size())).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("harmonic surface gradients match finite differences") {
  const int l_max = 6;
  auto eng = rng::make_engine(2);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    Vec3 x = rng::unit_vector(eng);
    if (std::abs(x[2]) > 0.99) x = Vec3(x[2], x[0], x[1]); // keep clear of the poles
    x.normalize();
    VecX vals;
    MatX grad;
    sph::real_harmonics_with_gradients(l_max, x, vals, grad);
    CHECK((vals - sph::real_harmonics(l_max, x)).cwiseAbs().maxCoeff() < 1e-14);

    Vec3 e1, e2;
    e1 = (std::abs(x[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(x).normalized();
    e2 = x.cross(e1);
    for (int idx : {1, 3, 8, 15, 24, 35, 48}) {
      for (const Vec3& e : {e1, e2}) {
        const VecX plus = sph::real_harmonics(l_max, (x + h * e).normalized());
        const VecX minus = sph::real_harmonics(l_max, (x - h * e).normalized());
        const double fd = (plus[idx] - minus[idx]) / (2 * h);
        CHECK(grad.row(idx).dot(e) == doctest::Approx(fd).epsilon(1e-5));
      }
      // Tangentiality.
      CHECK(std::abs(grad.row(idx).dot(x)) < 1e-10);
    }
  }
}

TEST_CASE("softmax_rule: zero hidden variable gives the uniform distribution") {
  const BasisSpec spec{2};
  MatrixHV lambda{MatX::Zero(2, spec.size())};
  const VecX q = softmax_rule(lambda, Vec3::UnitX(), spec);
  CHECK(q[0] == doctest::Approx(0.5));
  CHECK(q[1] == doctest::Approx(0.5));
}

TEST_CASE("softmax_rule: shift invariance along the all-outcomes direction") {
  const BasisSpec spec{3};
  auto eng = rng::make_engine(3);
  MatrixHV lambda{MatX(2, spec.size())};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < spec.size(); ++j) lambda.coeffs(i, j) = rng::normal(eng);
  MatrixHV shifted = lambda;
  VecX shift(spec.size());
  for (int j = 0; j < spec.size(); ++j) shift[j] = rng::normal(eng);
  shifted.coeffs.row(0) += shift.transpose();
  shifted.coeffs.row(1) += shift.transpose();
  for (int k = 0; k < 10; ++k) {
    const Vec3 n = rng::unit_vector(eng);
    const VecX q1 = softmax_rule(lambda, n, spec);
    const VecX q2 = softmax_rule(shifted, n, spec);
    CHECK((q1 - q2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(q1.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q1.minCoeff() > 0.0);
  }
}

TEST_CASE("softmax_rule: large logit gaps saturate, huge logits do not overflow") {
  const BasisSpec spec{0};
  MatrixHV lambda{MatX(2, 1)};
  lambda.coeffs << 30.0 * std::sqrt(kFourPi), 0.0; // logit gap 30 after basis scaling
  const VecX q = softmax_rule(lambda, Vec3::UnitZ(), spec);
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q[1] < 1e-12);

  lambda.coeffs << 1e6, -1e6;
  const VecX huge = softmax_rule(lambda, Vec3::UnitZ(), spec);
  CHECK(std::isfinite(huge[0]));
  CHECK(huge.sum() == doctest::Approx(1.0));
}

TEST_CASE("rotation_from_unitary: identity, axis rotations, homomorphism") {
  CHECK((rotation_from_unitary(Mat2c::Identity()) - Mat3::Identity()).cwiseAbs().maxCoeff() ==
        0.0);

  const double phi = 0.73;
  const Mat3 r = rotation_from_unitary(rotation_about(Vec3::UnitZ(), phi));
  // exp(-i phi sigma_z / 2) rotates by phi about z: check on sigma_x's image.
  CHECK(r(0, 0) == doctest::Approx(std::cos(phi)).epsilon(1e-12));
  CHECK(r(1, 0) == doctest::Approx(std::sin(phi)).epsilon(1e-12));
  CHECK(r(2, 2) == doctest::Approx(1.0).epsilon(1e-12));

  auto eng = rng::make_engine(4);
  for (int k = 0; k < 20; ++k) {
    const Mat2c u1 = rng::haar_su2(eng), u2 = rng::haar_su2(eng);
    const Mat3 lhs = rotation_from_unitary(u1 * u2);
    const Mat3 rhs = rotation_from_unitary(u1) * rotation_from_unitary(u2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    const Mat3 r1 = rotation_from_unitary(u1);
    CHECK((r1.transpose() * r1 - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r1.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    // Conjugation identity on a random direction.
    const Vec3 n = rng::unit_vector(eng);
    Mat2c ns = Mat2c::Zero();
    for (int j = 0; j < 3; ++j) ns += n[j] * quantum::pauli(j + 1);
    const Mat2c conj = u1 * ns * u1.adjoint();
    const Vec3 rn = r1 * n;
    Mat2c rns = Mat2c::Zero();
    for (int j = 0; j < 3; ++j) rns += rn[j] * quantum::pauli(j + 1);
    CHECK((conj - rns).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Global phase invariance.
  const Mat2c u = rotation_about(Vec3(0.6, 0.0, 0.8), 1.1);
  const complexd i1(0.0, 1.0);
  CHECK((rotation_from_unitary(u) - rotation_from_unitary((std::exp(i1 * 0.4) * u).eval()))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  Mat2c bad;
  bad << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS_AS(rotation_from_unitary(bad), std::invalid_argument);
}

TEST_CASE("d_matrix: identity is exact and blocks drop out of quadrature exactly") {
  const BasisSpec spec{4};
  const DMatrix d = d_matrix(Mat2c::Identity(), spec);
  CHECK((d.d - MatX::Identity(spec.size(), spec.size())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("d_matrix: pointwise expansion identity B(U[x]) = d_U B(x)") {
  const BasisSpec spec{5};
  auto eng = rng::make_engine(5);
  const Mat2c u = rng::haar_su2(eng);
  const Mat3 r = rotation_from_unitary(u);
  const DMatrix d = d_matrix(u, spec);
  for (int k = 0; k < 25; ++k) {
    const Vec3 x = rng::unit_vector(eng);
    const VecX lhs = real_sph_basis(spec, r * x);
    const VecX rhs = d.d * real_sph_basis(spec, x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("d_matrix: composition, degree blocks, quadrature guard") {
  const BasisSpec spec{5};
  auto eng = rng::make_engine(6);
  for (int k = 0; k < 10; ++k) {
    const Mat2c u1 = rng::haar_su2(eng), u2 = rng::haar_su2(eng);
    const DMatrix d1 = d_matrix(u1, spec), d2 = d_matrix(u2, spec);
    const DMatrix d12 = d_matrix((u1 * u2).eval(), spec);
    CHECK((d12.d - d1.d * d2.d).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(max_off_block(d1) < 1e-8);
    for (int l = 0; l <= spec.l_max; ++l) {
      const MatX b = d1.block(l);
      CHECK((b.transpose() * b - MatX::Identity(2 * l + 1, 2 * l + 1)).cwiseAbs().maxCoeff() <
            1e-8);
    }
  }
  CHECK_THROWS_AS(d_matrix(rng::haar_su2(eng), spec, 6), std::invalid_argument);
}

TEST_CASE("transform_hv: identity map, covariance, composition") {
  const BasisSpec spec{5};
  auto eng = rng::make_engine(7);
  MatrixHV lambda{MatX(2, spec.size())};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < spec.size(); ++j) lambda.coeffs(i, j) = rng::normal(eng);

  const MatrixHV same = transform_hv(lambda, Mat2c::Identity(), spec);
  CHECK((same.coeffs - lambda.coeffs).cwiseAbs().maxCoeff() == 0.0);

  for (int k = 0; k < 5; ++k) {
    const Mat2c u = rng::haar_su2(eng);
    const Mat3 r_dag = rotation_from_unitary(u.adjoint());
    const MatrixHV moved = transform_hv(lambda, u, spec);
    for (int j = 0; j < 5; ++j) {
      const Vec3 n = rng::unit_vector(eng);
      const VecX lhs = softmax_rule(lambda, r_dag * n, spec);
      const VecX rhs = softmax_rule(moved, n, spec);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
    }

    const Mat2c u2 = rng::haar_su2(eng);
    const MatrixHV once = transform_hv(lambda, (u * u2).eval(), spec);
    const MatrixHV twice = transform_hv(transform_hv(lambda, u2, spec), u, spec);
    CHECK((once.coeffs - twice.coeffs).cwiseAbs().maxCoeff() <
          1e-8 * std::max(1.0, lambda.coeffs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("d_matrix entries vary smoothly along a rotation path") {
  const BasisSpec spec{3};
  auto path = [&](double phi) { return d_matrix(rotation_about(Vec3::UnitY(), phi), spec).d; };
  const double phi0 = 0.5;
  auto fd = [&](double h) { return MatX((path(phi0 + h) - path(phi0 - h)) / (2 * h)); };
  const MatX f1 = fd(0.08), f2 = fd(0.04), f3 = fd(0.02);
  const double ratio = (f1 - f2).norm() / (f2 - f3).norm();
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2)); // O(h^2) convergence
}
