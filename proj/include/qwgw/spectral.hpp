#pragma once

#include <string>
#include <vector>

#include "qwgw/spin_core.hpp"
#include "qwgw/types.hpp"

// Fourier-space view of the walk: one 2x2 operator per wave-vector
// q = 2k in [-2pi, 2pi)^2 for spatially uniform angles.
namespace qwgw::spectral {

struct ModePoint {
  double qx = 0.0;
  double qy = 0.0;
};

/// Lattice wavenumber of DFT index n, folded into [-pi, pi).
double wavenumber(int n, int l);

/// Unitary DFT per spin component:
///   a(n1, n2) = (L1 L2)^{-1/2} sum_p psi(p) exp(-i (k1 p1 + k2 p2)).
/// The result is stored in a SpinorField indexed by (n1, n2).
spin::SpinorField dft_field(const spin::SpinorField& field);
spin::SpinorField idft_field(const spin::SpinorField& modes);

/// Exact one-step transfer matrix for plane waves exp(i (q/2) . p) when all
/// angles are uniform; `t_eps` is the mass-like term at that time.
Mat2 transfer_matrix(const AngleSet& angles, const spin::WalkParams& params, double t_eps,
                     ModePoint q);

/// Exact transfer matrix of the pure-shear walk (theta12 = theta21 =
/// pi/2 - xi g, m = 0, eps = 1). This is W(xi, g; q) without truncation.
Mat2 assembled_operator(double xi, double g, ModePoint q);

/// Coefficients entering the first-order operator. a = e^{i pi/4} a_bar / sqrt 2,
/// b = e^{-i pi/4} b_bar / sqrt 2.
struct ShearCoefficients {
  Complex a;
  Complex b;
  Complex a_bar;
  Complex b_bar;
};
ShearCoefficients shear_coefficients(ModePoint q);

/// Free operator W0(q).
Mat2 mode_w0(ModePoint q);
/// First-order shear correction W1(q), per unit xi g.
Mat2 mode_w1(ModePoint q);

struct ModeOperator {
  Mat2 w0;
  Mat2 w1;
  double xi = 0.0;
  double g = 0.0;

  static ModeOperator at(ModePoint q, double xi, double g) {
    return {mode_w0(q), mode_w1(q), xi, g};
  }
  Mat2 first_order() const { return w0 + Complex{xi * g} * w1; }
};

/// (|A|^2 + |B|^2)^{1/2}: the common modulus of the eigenvalues of W1.
double rho(ModePoint q);
/// (|A_bar|^2 + |B_bar|^2)^{1/2} = sqrt(2) rho. The peak amplitude
/// 4.69826 is quoted in this normalization.
double rho_bar(ModePoint q);

struct RhoMaximum {
  ModePoint q;
  double rho = 0.0;
  double rho_bar = 0.0;
};

/// Grid scan of rho over [-2pi, 2pi)^2 at N x N followed by compass
/// refinement down to a 1e-8 step. Returns the absolute maxima (four of
/// them) sorted lexicographically in (qx, qy). Requires N >= 256.
std::vector<RhoMaximum> find_rho_maxima(int resolution, int threads = 1);

/// Common zeros of A and B in the closed box [-2pi, 2pi]^2. Every local
/// minimum of the grid is refined and kept when rho < tolerance. Sorted lexicographically.
std::vector<ModePoint> unaffected_modes(double tolerance, int resolution = 512,
                                        int threads = 1);

/// Removes points that coincide modulo the 4pi period of q.
std::vector<ModePoint> distinct_modulo_zone(const std::vector<ModePoint>& points,
                                            double tol = 1e-6);

struct EigenPair {
  Complex eigenvalue;
  Spinor2 eigenvector;  ///< normalized, first nonzero component real positive
  double energy = 0.0;  ///< -arg(eigenvalue) in (-pi, pi]
};

struct Eigensystem {
  std::vector<EigenPair> pairs;  ///< two, or one when defective
  bool defective = false;
};

/// Closed-form eigendecomposition, pairs ordered by ascending energy.
Eigensystem eigen(const Mat2& m);

/// Energy branch convention: -arg(lambda) folded into (-pi, pi].
double energy_of(Complex eigenvalue);

/// Operator to first order in q:
///   [[1 + i(qx + xi g qy), -(qy + xi g qx)], [qy + xi g qx, 1 - i(qx + xi g qy)]].
Mat2 large_scale_operator(double xi, double g, ModePoint q);

struct PerturbativeEigs {
  Complex lambda_plus;
  Complex lambda_minus;
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  Spinor2 v0_plus;
  Spinor2 v1_plus;
};

/// First-order (in xi g) eigen-structure of the large-scale operator.
/// Throws DomainError for |q| = 0 (no direction) and for qx <= 0, where only
/// the numerical route through eigen() is supported.
PerturbativeEigs perturbative_eigs(double xi, double g, ModePoint q);

enum class GridKind { kRho, kRhoBar, kEnergyPlus, kEnergyMinus };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

struct SpectrumGrid {
  int resolution = 0;
  GridKind kind = GridKind::kRho;
  std::vector<double> values;  ///< row-major, qx index outer

  ModePoint point(int ix, int iy) const;
  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(ix) * static_cast<std::size_t>(resolution) +
                  static_cast<std::size_t>(iy)];
  }
};

/// Samples the requested quantity on q = -2pi + 4pi i / N. Energies use the
/// exact pure-shear operator at (xi, g).
SpectrumGrid spectrum_grid(GridKind kind, int resolution, double xi = 0.0, double g = 0.0,
                           int threads = 1);

/// CSV with header `qX,qY,value`, 17 significant digits.
void write_csv(const SpectrumGrid& grid, const std::string& path);

}  // namespace qwgw::spectral
