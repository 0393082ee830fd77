#include "qwgw/geometry.hpp"

#include <cmath>
#include <sstream>

namespace qwgw::geometry {

int levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  // even permutations of (0, 1, 2)
  if ((a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0)) return 1;
  return -1;
}

std::array<std::array<double, 2>, 2> cosine_matrix(const AngleSet& a) {
  return {{{std::cos(a.t11), std::cos(a.t12)}, {std::cos(a.t21), std::cos(a.t22)}}};
}

Triad triad_from_angles(const AngleSet& angles) {
  const auto c = cosine_matrix(angles);
  Triad t;
  t.e[0][0] = 1.0;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) t.e[k + 1][l + 1] = c[k][l];
  return t;
}

DualTriad dual_triad(const Triad& t) {
  const auto& e = t.e;
  if (e[0][0] != 1.0 || e[0][1] != 0.0 || e[0][2] != 0.0 || e[1][0] != 0.0 ||
      e[2][0] != 0.0) {
    throw GeometryError("triad is not synchronous: e^0_(0) must be 1 and mixed time-space "
                        "components must vanish");
  }
  const double det = e[1][1] * e[2][2] - e[1][2] * e[2][1];
  if (!(std::abs(det) >= 1e-10)) {
    std::ostringstream os;
    os << "singular triad: spatial determinant " << det << " (|det| < 1e-10)";
    throw GeometryError(os.str());
  }
  DualTriad d;
  d.d[0][0] = 1.0;
  d.d[1][1] = e[2][2] / det;
  d.d[1][2] = -e[1][2] / det;
  d.d[2][1] = -e[2][1] / det;
  d.d[2][2] = e[1][1] / det;
  return d;
}

Metric3 metric_from_dual_triad(const DualTriad& dual) {
  Metric3 m;
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += kEta[a][b] * dual.d[a][mu] * dual.d[b][nu];
      m.g[mu][nu] = s;
    }
  return m;
}

Metric3 metric_block_form(const DualTriad& dual) {
  const auto& d = dual.d;
  Metric3 m;
  m.g[0][0] = 1.0;
  m.g[1][1] = -d[1][1] * d[1][1] - d[2][1] * d[2][1];
  m.g[2][2] = -d[2][2] * d[2][2] - d[1][2] * d[1][2];
  m.g[1][2] = -d[1][2] * d[1][1] - d[2][1] * d[2][2];
  m.g[2][1] = m.g[1][2];
  return m;
}

double Waveform::operator()(double t) const {
  switch (kind) {
    case Kind::kConstant: return amplitude;
    case Kind::kSine: return amplitude * std::sin(frequency * t);
    case Kind::kCosine: return amplitude * std::cos(frequency * t);
  }
  return 0.0;
}

std::string to_string(Waveform::Kind kind) {
  switch (kind) {
    case Waveform::Kind::kConstant: return "constant";
    case Waveform::Kind::kSine: return "sine";
    case Waveform::Kind::kCosine: return "cosine";
  }
  return "?";
}

Waveform::Kind waveform_kind_from_string(const std::string& name) {
  if (name == "constant") return Waveform::Kind::kConstant;
  if (name == "sine") return Waveform::Kind::kSine;
  if (name == "cosine") return Waveform::Kind::kCosine;
  throw ConfigError("unknown waveform '" + name + "' (expected constant, sine or cosine)");
}

AngleSet gw_angles(const GwParams& gw, double t) {
  const double f = gw.f(t);
  const double r11 = -gw.xi * (f - gw.k);
  const double r22 = gw.xi * (f + gw.k_prime);
  if (r11 < 0.0) {
    std::ostringstream os;
    os << "gravitational-wave sign condition violated at T=" << t << ": -xi (F - K) = " << r11
       << " < 0; adjust K";
    throw DomainError(os.str());
  }
  if (r22 < 0.0) {
    std::ostringstream os;
    os << "gravitational-wave sign condition violated at T=" << t << ": xi (F + K') = " << r22
       << " < 0; adjust K_prime";
    throw DomainError(os.str());
  }
  AngleSet a;
  a.t11 = std::sqrt(r11);
  a.t22 = std::sqrt(r22);
  a.t12 = kPi / 2 - gw.xi * gw.g(t);
  a.t21 = a.t12;
  return a;
}

Metric3 gw_metric_reference(const GwParams& gw, double t) {
  const double f = gw.f(t);
  Metric3 m;
  m.g[0][0] = 1.0;
  m.g[1][1] = -(1.0 - gw.xi * (f - gw.k));
  m.g[2][2] = -(1.0 + gw.xi * (f + gw.k_prime));
  m.g[1][2] = gw.xi * gw.g(t);
  m.g[2][1] = m.g[1][2];
  return m;
}

}  // namespace qwgw::geometry
