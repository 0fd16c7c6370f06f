#pragma once

#include "lhv/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace lhv::rng {

// All stochastic choices in the project go through the helpers below.
// mt19937_64 output is fully specified by the standard, and the mappings
// to doubles are spelled out here instead of using std::*_distribution,
// whose algorithms are implementation-defined. This is what makes the
// --reproducible contract (byte-identical outputs for a fixed seed) hold
// independently of the standard library in use.

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Derives an independent stream for a substask (e.g. one stream per state).
inline Engine substream(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step keeps substreams decorrelated even for adjacent indices.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return Engine(z ^ (z >> 31));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform(eng);
}

// Standard normal via Box-Muller (trigonometric form).
inline double normal(Engine& eng) {
  double u1 = uniform(eng);
  while (u1 <= 0.0) u1 = uniform(eng);
  const double u2 = uniform(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Uniform point on the unit sphere.
inline Vec3 unit_vector(Engine& eng) {
  const double z = uniform(eng, -1.0, 1.0);
  const double phi = uniform(eng, 0.0, 2.0 * kPi);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

// Haar-random SU(2) element via a uniformly random unit quaternion.
inline Mat2c haar_su2(Engine& eng) {
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q[i] = normal(eng);
  q.normalize();
  Mat2c u;
  const complexd i1(0.0, 1.0);
  u << q[0] + i1 * q[3], q[2] + i1 * q[1], -q[2] + i1 * q[1], q[0] - i1 * q[3];
  return u;
}

} // namespace lhv::rng
