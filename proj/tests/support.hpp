#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qwgw/spin_core.hpp"
#include "qwgw/types.hpp"

// Shared fixtures: seeded random data and the lattice plane-wave oracle.
namespace qwgw::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline spin::SpinorField random_field(int l1, int l2) {
  spin::SpinorField f(l1, l2);
  for (auto& s : f.sites())
    s = {{uniform(-1, 1), uniform(-1, 1)}, {uniform(-1, 1), uniform(-1, 1)}};
  return f;
}

inline AngleSet random_angles(double lo = 0.1, double hi = 1.4) {
  return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)};
}

/// exp(i (k1 p1 + k2 p2)) times `spin`, with k = 2 pi n / L.
inline spin::SpinorField plane_wave(int l1, int l2, int n1, int n2, Spinor2 spin) {
  spin::SpinorField f(l1, l2);
  for (int p1 = 0; p1 < l1; ++p1)
    for (int p2 = 0; p2 < l2; ++p2) {
      const double phase = 2 * kPi * (static_cast<double>((n1 * p1) % l1) / l1 +
                                      static_cast<double>((n2 * p2) % l2) / l2);
      f.at(p1, p2) = std::exp(Complex{0.0, phase}) * spin;
    }
  return f;
}

/// The 2x2 matrix by which one lattice step multiplies the plane wave of
/// indices (n1, n2), read off at the origin from the two basis polarizations.
inline Mat2 lattice_transfer(int l, int n1, int n2, const spin::AngleProvider& provider,
                             const spin::WalkParams& params, long j = 0) {
  Mat2 m;
  const Spinor2 basis[2] = {{Complex{1.0}, Complex{}}, {Complex{}, Complex{1.0}}};
  for (int c = 0; c < 2; ++c) {
    const auto out = spin::step(plane_wave(l, l, n1, n2, basis[c]), j, provider, params);
    m(0, c) = out.at(0, 0).minus;
    m(1, c) = out.at(0, 0).plus;
  }
  return m;
}

/// Lattice index of the wave-vector component q = 2k = 4 pi n / l.
inline double q_of(int n, int l) { return 4 * kPi * n / l; }

}  // namespace qwgw::testing

namespace qwgw::testing {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic value in [lo, hi) keyed by (seed, j, p1, p2, slot).
inline double hashed(std::uint64_t seed, long j, int p1, int p2, int slot, double lo, double hi) {
  std::uint64_t h = splitmix(seed);
  for (long v : {j, static_cast<long>(p1), static_cast<long>(p2), static_cast<long>(slot)})
    h = splitmix(h ^ static_cast<std::uint64_t>(v));
  return lo + (hi - lo) * static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Random angle history in [0.1, 1.4] keeping the cosine matrix well away
/// from singular: diagonal angles in [0.1, 0.6], off-diagonal in [0.9, 1.4].
inline spin::AngleProvider random_provider(std::uint64_t seed, bool uniform_in_space) {
  return spin::AngleProvider(
      [seed, uniform_in_space](long j, int p1, int p2) {
        if (uniform_in_space) p1 = p2 = 0;
        return AngleSet{hashed(seed, j, p1, p2, 0, 0.1, 0.6), hashed(seed, j, p1, p2, 1, 0.9, 1.4),
                        hashed(seed, j, p1, p2, 2, 0.9, 1.4), hashed(seed, j, p1, p2, 3, 0.1, 0.6)};
      },
      uniform_in_space);
}

}  // namespace qwgw::testing
