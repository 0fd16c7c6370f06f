#include "lhv/bell.hpp"

#include <cmath>
#include <stdexcept>

namespace lhv::bell {

double bell_rule(const Vec3& n, const Vec3& lambda, Outcome o) {
  const double up = theta(n.dot(lambda));
  return o == Outcome::Up ? up : 1.0 - up;
}

double single_qubit_density(const Vec3& r, const Vec3& lambda) {
  const double norm = r.norm();
  if (norm > 1.0 + 1e-12) throw std::domain_error("Bloch vector has norm > 1");
  return (4.0 * ramp(r.dot(lambda)) + 1.0 - norm) / kFourPi;
}

bool validity(const BlochTwoQubit& s) {
  return s.a.norm() + s.b.norm() + quantum::singular_data(s.T).sum() <= 1.0 + 1e-12;
}

TwoQubitLhvDensity::TwoQubitLhvDensity(const BlochTwoQubit& s)
    : TwoQubitLhvDensity(s.a, s.b, quantum::singular_data(s.T)) {}

TwoQubitLhvDensity::TwoQubitLhvDensity(const Vec3& a, const Vec3& b, const SingularData& svd)
    : svd_(svd), norm_a_(a.norm()), norm_b_(b.norm()) {
  state_.a = a;
  state_.b = b;
  state_.T = svd.reconstruct();
  constant_ = 1.0 - norm_a_ - norm_b_ - svd_.sum();
  if (constant_ < -1e-12)
    throw std::domain_error("state outside the construction domain: ||a|| + ||b|| + sum S_j > 1");
}

double TwoQubitLhvDensity::value(const Vec3& l1, const Vec3& l2) const {
  double v = constant_ + 4.0 * ramp(state_.a.dot(l1)) + 4.0 * ramp(state_.b.dot(l2));
  for (int j = 0; j < 3; ++j) {
    v += 8.0 * svd_.S[j] * ramp(svd_.U.col(j).dot(l1) * svd_.V.col(j).dot(l2));
  }
  return v / (kFourPi * kFourPi);
}

void TwoQubitLhvDensity::ambient_gradient(const Vec3& l1, const Vec3& l2, Vec3& g1,
                                          Vec3& g2) const {
  g1 = 4.0 * theta(state_.a.dot(l1)) * state_.a;
  g2 = 4.0 * theta(state_.b.dot(l2)) * state_.b;
  for (int j = 0; j < 3; ++j) {
    const double cu = svd_.U.col(j).dot(l1);
    const double cv = svd_.V.col(j).dot(l2);
    const double step = 8.0 * svd_.S[j] * theta(cu * cv);
    g1 += step * cv * svd_.U.col(j);
    g2 += step * cu * svd_.V.col(j);
  }
  g1 /= kFourPi * kFourPi;
  g2 /= kFourPi * kFourPi;
}

double two_qubit_density(const BlochTwoQubit& s, const HiddenPoint& p) {
  return TwoQubitLhvDensity(s).value(p);
}

SphereQuadrature sphere_quadrature(int order) { return sph::sphere_grid_for_order(order); }

namespace {

double event_weight(const quantum::MeasurementEvent& m, const Vec3& l1, const Vec3& l2) {
  return bell_rule(m.parties[0].direction, l1, m.parties[0].outcome) *
         bell_rule(m.parties[1].direction, l2, m.parties[1].outcome);
}

Estimate quadrature_probability(const TwoQubitLhvDensity& density,
                                const quantum::MeasurementEvent& m,
                                const IntegratorConfig& config) {
  auto evaluate = [&](int n_theta, int n_phi) {
    const auto grid = sph::sphere_grid(n_theta, n_phi);
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double q1 = bell_rule(m.parties[0].direction, grid.nodes[i], m.parties[0].outcome);
      if (q1 == 0.0) continue;
      double inner = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double q2 = bell_rule(m.parties[1].direction, grid.nodes[j], m.parties[1].outcome);
        if (q2 == 0.0) continue;
        inner += grid.weights[j] * q2 * density.value(grid.nodes[i], grid.nodes[j]);
      }
      total += grid.weights[i] * q1 * inner;
    }
    return total;
  };

  Estimate est;
  int n_theta = config.quad_n_theta / 2;
  int n_phi = config.quad_n_phi / 2;
  double coarse = evaluate(n_theta, n_phi);
  est.evaluations = std::size_t(n_theta) * n_phi * n_theta * n_phi;
  for (int r = 0; r <= config.quad_refinements; ++r) {
    n_theta *= 2;
    n_phi *= 2;
    const double fine = evaluate(n_theta, n_phi);
    est.evaluations += std::size_t(n_theta) * n_phi * n_theta * n_phi;
    est.value = fine;
    est.error = std::abs(fine - coarse);
    if (est.error <= config.tolerance) return est;
    coarse = fine;
  }
  est.converged = false;
  return est;
}

} // namespace

Estimate lhv_probability(const TwoQubitLhvDensity& density, const quantum::MeasurementEvent& m,
                         const IntegratorConfig& config) {
  if (m.parties.size() != 2) throw std::invalid_argument("lhv_probability expects a 2-party event");
  for (const auto& p : m.parties)
    if (std::abs(p.direction.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("measurement direction is not a unit vector");

  Estimate est;
  if (config.mode == IntegratorMode::ProductQuadrature) {
    est = quadrature_probability(density, m, config);
  } else {
    auto eng = rng::make_engine(config.seed);
    const double scale = kFourPi * kFourPi;
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    while (n < config.mc_max_samples) {
      const std::size_t target = (n == 0)
                                     ? std::min(config.mc_max_samples, config.mc_samples)
                                     : std::min(config.mc_max_samples, 2 * n);
      for (; n < target; ++n) {
        const Vec3 l1 = rng::unit_vector(eng);
        const Vec3 l2 = rng::unit_vector(eng);
        const double f = scale * density.value(l1, l2) * event_weight(m, l1, l2);
        sum += f;
        sumsq += f * f;
      }
      est.value = sum / double(n);
      const double var = std::max(0.0, sumsq / double(n) - est.value * est.value);
      est.error = std::sqrt(var / double(n));
      est.evaluations = n;
      if (config.confidence_sigmas * est.error <= config.tolerance) return est;
    }
    est.converged = false;
  }
  if (!est.converged)
    throw std::runtime_error("integrator budget exhausted before reaching requested tolerance");
  return est;
}

std::vector<std::array<Estimate, 4>> lhv_joint_table(const TwoQubitLhvDensity& density,
                                                     const std::vector<SettingPair>& settings,
                                                     const IntegratorConfig& config) {
  const std::size_t ns = settings.size();
  std::vector<std::array<double, 4>> sum(ns, {0, 0, 0, 0});
  std::vector<std::array<double, 4>> sumsq(ns, {0, 0, 0, 0});
  std::vector<std::array<Estimate, 4>> out(ns);

  auto eng = rng::make_engine(config.seed);
  const double scale = kFourPi * kFourPi;
  std::size_t n = 0;
  bool converged = false;
  while (!converged && n < config.mc_max_samples) {
    const std::size_t target = (n == 0)
                                   ? std::min(config.mc_max_samples, config.mc_samples)
                                   : std::min(config.mc_max_samples, 2 * n);
    for (; n < target; ++n) {
      const Vec3 l1 = rng::unit_vector(eng);
      const Vec3 l2 = rng::unit_vector(eng);
      const double d = scale * density.value(l1, l2);
      for (std::size_t k = 0; k < ns; ++k) {
        const double t1 = theta(settings[k].n1.dot(l1));
        const double t2 = theta(settings[k].n2.dot(l2));
        const double f[4] = {d * t1 * t2, d * t1 * (1.0 - t2), d * (1.0 - t1) * t2,
                             d * (1.0 - t1) * (1.0 - t2)};
        for (int o = 0; o < 4; ++o) {
          sum[k][o] += f[o];
          sumsq[k][o] += f[o] * f[o];
        }
      }
    }
    converged = true;
    for (std::size_t k = 0; k < ns; ++k) {
      for (int o = 0; o < 4; ++o) {
        Estimate& e = out[k][o];
        e.value = sum[k][o] / double(n);
        const double var = std::max(0.0, sumsq[k][o] / double(n) - e.value * e.value);
        e.error = std::sqrt(var / double(n));
        e.evaluations = n;
        e.converged = config.confidence_sigmas * e.error <= config.tolerance;
        converged = converged && e.converged;
      }
    }
  }
  return out;
}

std::array<double, 4> quantum_joint_row(const BlochTwoQubit& s, const SettingPair& setting) {
  const auto rho = quantum::density_from_bloch(s);
  std::array<double, 4> out{};
  const Outcome oc[2] = {Outcome::Up, Outcome::Down};
  for (int o1 = 0; o1 < 2; ++o1)
    for (int o2 = 0; o2 < 2; ++o2)
      out[o1 * 2 + o2] = quantum::quantum_probability(
          rho, quantum::MeasurementEvent::pair(setting.n1, oc[o1], setting.n2, oc[o2]));
  return out;
}

} // namespace lhv::bell
