#pragma once

#include <span>
#include <string>
#include <vector>

#include "qwgw/spin_core.hpp"

// Two same-energy plane waves, one gravitational-wave step, and the relative
// density variation they leave behind.
namespace qwgw::interference {

/// q is the wavenumber shared by both modes; g0 is the value of G during the
/// single step.
struct InterferenceSetup {
  double q = 0.0;
  int l1 = 64;
  int l2 = 64;
  double xi = 1e-4;
  double g0 = 1.0;

  /// Throws ConfigError when the lattice is invalid or when exp(i q p / 2)
  /// does not fit it; the message names the nearest admissible q.
  void validate() const;
};

/// Admissible wavenumbers on a side of length l are 4 pi n / l. Returns the
/// one closest to q with n >= 1.
double nearest_admissible_q(double q, int l);

/// Psi1 exp(i q pX / 2) + Psi2 exp(i q pY / 2), Psi1 = (0, 1),
/// Psi2 = (-i, 1) / sqrt 2.
spin::SpinorField initial_superposition(const InterferenceSetup& setup);

/// 2 + sqrt(2) cos(q u / 2)
double initial_density(double q, double u);

/// Site densities after one pure-shear step (theta12 = theta21 = pi/2 - xi g0,
/// m = 0, eps = 1) applied to the superposition.
std::vector<double> density_after_step(const InterferenceSetup& setup, int threads = 1);

/// Delta as a function of the diagonal offset u = pX - pY.
struct DensityProfile {
  std::vector<int> u;  ///< ascending, every offset present on the lattice
  std::vector<double> value;
};

struct DeltaSimulation {
  InterferenceSetup setup;
  std::vector<double> n0;     ///< per site, row-major (pX outer)
  std::vector<double> delta;  ///< (N1 - N0) / (xi g0 N0) per site
  DensityProfile profile;
  double diagonal_spread = 0.0;  ///< largest deviation along one u diagonal
};

/// Runs the step and collapses Delta onto u. Throws DomainError when
/// xi g0 = 0 and ConsistencyError when Delta is not constant along the
/// diagonals.
DeltaSimulation simulate_delta(const InterferenceSetup& setup, int threads = 1);
DensityProfile delta_simulated(const InterferenceSetup& setup, int threads = 1);

/// [2 sqrt 2 / N0(q, u)] cos(q (u - 2) / 2) sin^2 q
double delta_formula(double q, double u);

/// max over real u of |delta_formula(q, u)|: 4096 samples over one period
/// 4 pi / q, then refinement down to 1e-10. Defined on [0, pi]; zero at both
/// ends. Throws DomainError outside.
double delta_max(double q);

/// 2 sqrt2 sin^2 q s / (2 + sqrt2 cos q s - sin^2 q), s = sqrt(1 - sin^2 q / 2)
double f_closed(double q);

/// Closed form of delta_max: f(pi - q) on [0, pi/2), f(q) on [pi/2, pi].
double delta_max_closed_form(double q);

/// Same maximum restricted to integer u, which is what a lattice can show.
/// Scans u = 0 .. ceil(4 pi / q) (at most 2^20 values).
double delta_max_integer(double q);

/// Location of the absolute maximum of delta_max in (pi/2, pi); the other one
/// sits at pi - q_max.
double q_max();

/// 4 pi / |q|
double wavelength(double q);

/// Figure tables. Each throws IoError naming the path on a failed write.
/// Grid over the lattice: `pX,pY,N0,delta`.
void write_density_grid(const DeltaSimulation& sim, const std::string& path);
/// Profiles over exactly two periods of u, `samples` points each: `q,u,delta`.
void write_profiles(std::span<const double> qs, int samples, const std::string& path);
/// delta_max on q = pi i / n, i = 0 .. n - 1: `q,deltaM_continuous,deltaM_integer`.
void write_deltam_sweep(int n, const std::string& path, int threads = 1);

}  // namespace qwgw::interference
