#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qwgw/geometry.hpp"
#include "qwgw/spin_core.hpp"

// The curved-space Dirac Hamiltonian reached by the walk as eps -> 0, and the
// numerical checks tying the two together.
namespace qwgw::continuum {

/// gamma^(0) = sigma_1, gamma^(1) = [[0, 1], [-1, 0]], gamma^(2) = diag(i, -i).
struct GammaRep {
  std::array<Mat2, 3> upper;

  /// gamma_(a) = eta_ab gamma^(b)
  Mat2 lowered(int a) const;
};

GammaRep gamma_rep();

/// max over (a, b) of |gamma^a gamma^b + gamma^b gamma^a - 2 eta^{ab} 1|.
double clifford_defect(const GammaRep& g);

/// S_(c)(d) = (i/2) [gamma_(c), gamma_(d)]
Mat2 spin_tensor(const GammaRep& g, int c, int d);

/// J_(b)(c)(d) = {gamma_(b), S_(c)(d)}; equals 2 eps_{bcd} times the identity.
Mat2 j_tensor(const GammaRep& g, int b, int c, int d);

/// B^1 = [[-cos t11, -i cos t12], [i cos t12, cos t11]], B^2 likewise with
/// (t21, t22).
std::pair<Mat2, Mat2> b_matrices(const AngleSet& angles);

/// B^k = e^k_(a) gamma^(0) gamma^(a) from a triad.
std::pair<Mat2, Mat2> b_from_triad(const geometry::Triad& triad);

/// B^k rebuilt as D^{k1} + Pi^-1 D^{k2} Pi, D^{kl} = diag(-cos t^{kl}, cos t^{kl}).
Mat2 b_decomposition(const AngleSet& angles, int k);

using DualTriadSeries = std::function<geometry::DualTriad(double t)>;

/// -eps^{abc} eta_cd e^mu_(a) d_b e^(d)_mu for a time-dependent, spatially
/// uniform synchronous dual triad; time derivative by centered differences.
double t0(const DualTriadSeries& series, double t, double h);

/// e^(1)nu d_0 e^(2)_nu - e^(2)nu d_0 e^(1)_nu, indices raised with eta.
double t0_decomposed(const DualTriadSeries& series, double t, double h);

/// Site-resolved coefficients of H at one time slice.
struct HamiltonianField {
  int l1 = 0;
  int l2 = 0;
  double spacing = 0.0;  ///< physical distance between neighbouring sites
  std::vector<Mat2> b1, b2;
  std::vector<Mat2> db1, db2;      ///< d_1 B^1 and d_2 B^2
  std::vector<double> mass_term;  ///< m - T/4
};

/// Coefficients from the walk angles at time j on an l1 x l2 lattice with
/// site spacing eps / 2. T is the lattice mass-like term T_eps at j.
HamiltonianField build_hamiltonian(const spin::AngleProvider& provider, long j,
                                   const spin::WalkParams& params, int l1, int l2);

/// H psi = sum_k -i (B^k d_k psi + (1/2)(d_k B^k) psi) + (m - T/4) gamma^(0) psi,
/// with spectral derivatives on the periodic lattice.
spin::SpinorField hamiltonian_apply(const spin::SpinorField& field, const HamiltonianField& h);

/// Fraction of the norm carried by modes with |k| > pi/2 along either axis.
double spectral_tail_fraction(const spin::SpinorField& field);

/// ||V_j psi - psi + i eps H psi|| / ||psi||. Throws DomainError when the
/// field is not bandlimited (tail fraction >= 1e-8).
double continuum_residual(const spin::AngleProvider& provider, const spin::WalkParams& params,
                          const spin::SpinorField& field, long j);

enum class ContinuumCase { kFlat, kPureShear, kMassive, kCurved };

std::string to_string(ContinuumCase c);

struct ResidualPoint {
  double epsilon = 0.0;
  double residual = 0.0;
};

struct ResidualScan {
  ContinuumCase which = ContinuumCase::kFlat;
  std::vector<ResidualPoint> points;
  double slope = 0.0;  ///< fitted order in eps
};

/// Residual at each eps with the physical box length fixed (the lattice has
/// 2 round(box / eps) sites per side), so the data keep a fixed physical
/// wavelength as the lattice is refined.
ResidualScan residual_scan(ContinuumCase which, std::span<const double> epsilons,
                           double box_length = 1.6,
                           spin::MassGate gate = spin::MassGate::kContinuum, int threads = 1);

}  // namespace qwgw::continuum
