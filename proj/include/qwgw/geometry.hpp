#pragma once

#include <array>
#include <string>

#include "qwgw/types.hpp"

// Angle fields <-> triads <-> metrics, and the angle fields that encode a
// linear gravitational wave in synchronous coordinates (T, X, Y).
namespace qwgw::geometry {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Minkowski metric diag(1, -1, -1).
inline constexpr Mat3 kEta{{{1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}}};

/// Totally antisymmetric symbol with eps(0,1,2) = +1.
int levi_civita(int a, int b, int c);

/// Triad components e^mu_(a), stored e[mu][a]. The time row and column are
/// fixed to (1, 0, 0): only synchronous frames are representable.
struct Triad {
  Mat3 e{};
};

/// Dual triad components e^(a)_mu, stored d[a][mu].
struct DualTriad {
  Mat3 d{};
};

/// Covariant metric g_{mu nu}.
struct Metric3 {
  Mat3 g{};
};

/// Cosine matrix [cos theta^{kl}] as a plain 2x2 array.
std::array<std::array<double, 2>, 2> cosine_matrix(const AngleSet& angles);

Triad triad_from_angles(const AngleSet& angles);

/// Throws GeometryError when the spatial block has |det| < 1e-10 or the
/// border is not of synchronous form.
DualTriad dual_triad(const Triad& t);

/// g_{mu nu} = eta_ab e^(a)_mu e^(b)_nu.
Metric3 metric_from_dual_triad(const DualTriad& d);

/// Same metric through the explicit block expressions for g11, g22, g12.
Metric3 metric_block_form(const DualTriad& d);

/// Named time profile used for the polarizations F(T) and G(T).
struct Waveform {
  enum class Kind { kConstant, kSine, kCosine };
  Kind kind = Kind::kConstant;
  double amplitude = 0.0;
  double frequency = 0.0;  ///< pulsation omega

  double operator()(double t) const;
  static Waveform constant(double a) { return {Kind::kConstant, a, 0.0}; }
  static Waveform sine(double a, double w) { return {Kind::kSine, a, w}; }
  static Waveform cosine(double a, double w) { return {Kind::kCosine, a, w}; }
};

std::string to_string(Waveform::Kind kind);
Waveform::Kind waveform_kind_from_string(const std::string& name);

/// Plane gravitational wave restricted to the polarization plane, plus the
/// rescaling constants K and K' that keep both diagonal cosines below one.
struct GwParams {
  double xi = 0.0;
  Waveform f{};
  Waveform g{};
  double k = 0.0;
  double k_prime = 0.0;

  static GwParams pure_shear(double xi, Waveform g) { return {xi, Waveform{}, g, 0.0, 0.0}; }
};

/// theta11 = sqrt(-xi (F - K)), theta22 = sqrt(xi (F + K')),
/// theta12 = theta21 = pi/2 - xi G. Throws DomainError when a radicand is
/// negative, naming the constant that has to be adjusted.
AngleSet gw_angles(const GwParams& gw, double t);

/// First-order metric of the wave in (T, X, Y), written down directly:
/// g11 = -(1 - xi (F - K)), g22 = -(1 + xi (F + K')), g12 = xi G.
Metric3 gw_metric_reference(const GwParams& gw, double t);

}  // namespace qwgw::geometry
