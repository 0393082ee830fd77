#include "qwgw/continuum.hpp"

#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "qwgw/fit.hpp"
#include "qwgw/parallel.hpp"
#include "qwgw/spectral.hpp"

namespace qwgw::continuum {

using geometry::kEta;
using geometry::levi_civita;
using spin::SpinorField;

Mat2 GammaRep::lowered(int a) const {
  return Complex{kEta[a][a]} * upper[static_cast<std::size_t>(a)];
}

GammaRep gamma_rep() {
  return {{Mat2{{Complex{}, Complex{1.0}, Complex{1.0}, Complex{}}},
           Mat2{{Complex{}, Complex{1.0}, Complex{-1.0}, Complex{}}},
           Mat2::diag(kI, -kI)}};
}

double clifford_defect(const GammaRep& g) {
  double worst = 0.0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      const Mat2 anti = g.upper[a] * g.upper[b] + g.upper[b] * g.upper[a];
      worst = std::max(worst, max_abs_diff(anti, Complex{2.0 * kEta[a][b]} * Mat2::identity()));
    }
  return worst;
}

Mat2 spin_tensor(const GammaRep& g, int c, int d) {
  const Mat2 gc = g.lowered(c);
  const Mat2 gd = g.lowered(d);
  return Complex{0.0, 0.5} * (gc * gd - gd * gc);
}

Mat2 j_tensor(const GammaRep& g, int b, int c, int d) {
  const Mat2 gb = g.lowered(b);
  const Mat2 s = spin_tensor(g, c, d);
  return gb * s + s * gb;
}

std::pair<Mat2, Mat2> b_matrices(const AngleSet& a) {
  auto make = [](double diag_angle, double off_angle) {
    const double c = std::cos(diag_angle);
    const double o = std::cos(off_angle);
    return Mat2{{Complex{-c}, -kI * o, kI * o, Complex{c}}};
  };
  return {make(a.t11, a.t12), make(a.t21, a.t22)};
}

std::pair<Mat2, Mat2> b_from_triad(const geometry::Triad& triad) {
  const auto g = gamma_rep();
  std::array<Mat2, 2> b{};
  for (int k = 1; k <= 2; ++k) {
    Mat2 s = Mat2::zero();
    for (int a = 0; a < 3; ++a)
      s += Complex{triad.e[k][a]} * (g.upper[0] * g.upper[static_cast<std::size_t>(a)]);
    b[static_cast<std::size_t>(k - 1)] = s;
  }
  return {b[0], b[1]};
}

Mat2 b_decomposition(const AngleSet& a, int k) {
  const double first = k == 1 ? a.t11 : a.t21;
  const double second = k == 1 ? a.t12 : a.t22;
  const Mat2 d1 = Mat2::diag(-std::cos(first), std::cos(first));
  const Mat2 d2 = Mat2::diag(-std::cos(second), std::cos(second));
  return d1 + spin::pi_inverse() * d2 * spin::pi_matrix();
}

namespace {

void require_synchronous(const geometry::DualTriad& d) {
  if (d.d[0][0] != 1.0 || d.d[0][1] != 0.0 || d.d[0][2] != 0.0 || d.d[1][0] != 0.0 ||
      d.d[2][0] != 0.0)
    throw GeometryError("dual triad is not of synchronous block form (e^(0)_0 = 1, mixed "
                        "components 0)");
}

geometry::Triad triad_of(const geometry::DualTriad& dual) {
  require_synchronous(dual);
  // The inverse of a synchronous dual triad is obtained exactly as dual_triad
  // inverts a triad; reuse it on the transposed roles.
  geometry::Triad as_triad;
  as_triad.e = dual.d;
  const auto inv = geometry::dual_triad(as_triad);
  geometry::Triad t;
  t.e = inv.d;
  return t;
}

struct SeriesSample {
  geometry::Triad triad;
  geometry::Mat3 d_dt{};  // d_0 e^(d)_mu, stored [d][mu]
};

SeriesSample sample(const DualTriadSeries& series, double t, double h) {
  const auto now = series(t);
  const auto fwd = series(t + h);
  const auto bwd = series(t - h);
  require_synchronous(fwd);
  require_synchronous(bwd);
  SeriesSample s{triad_of(now), {}};
  for (int d = 0; d < 3; ++d)
    for (int mu = 0; mu < 3; ++mu) s.d_dt[d][mu] = (fwd.d[d][mu] - bwd.d[d][mu]) / (2 * h);
  return s;
}

}  // namespace

double t0(const DualTriadSeries& series, double t, double h) {
  const auto s = sample(series, t, h);
  double out = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const int eps = levi_civita(a, b, c);
        if (eps == 0) continue;
        for (int d = 0; d < 3; ++d)
          for (int mu = 0; mu < 3; ++mu) {
            // spatially uniform series: only the time derivative survives
            const double deriv = b == 0 ? s.d_dt[d][mu] : 0.0;
            out -= eps * kEta[c][d] * s.triad.e[mu][a] * deriv;
          }
      }
  return out;
}

double t0_decomposed(const DualTriadSeries& series, double t, double h) {
  const auto s = sample(series, t, h);
  double out = 0.0;
  for (int nu = 0; nu < 3; ++nu) {
    const double raised1 = kEta[1][1] * s.triad.e[nu][1];  // e^(1)nu
    const double raised2 = kEta[2][2] * s.triad.e[nu][2];  // e^(2)nu
    out += raised1 * s.d_dt[2][nu] - raised2 * s.d_dt[1][nu];
  }
  return out;
}

namespace {

// Spectral derivative along `axis` (1 or 2) of a row-major complex array.
std::vector<Complex> spectral_derivative(std::vector<Complex> v, int l1, int l2, int axis,
                                         double spacing) {
  detail::fft2(v, l1, l2, -1);
  const double norm = 1.0 / (static_cast<double>(l1) * static_cast<double>(l2));
  const int len = axis == 1 ? l1 : l2;
  for (int n1 = 0; n1 < l1; ++n1)
    for (int n2 = 0; n2 < l2; ++n2) {
      const int n = axis == 1 ? n1 : n2;
      // the Nyquist mode has no odd-derivative partner; drop it
      const double k = 2 * n == len ? 0.0 : spectral::wavenumber(n, len) / spacing;
      auto& x = v[static_cast<std::size_t>(n1) * static_cast<std::size_t>(l2) +
                  static_cast<std::size_t>(n2)];
      x *= kI * k * norm;
    }
  detail::fft2(v, l1, l2, +1);
  return v;
}

std::vector<Mat2> matrix_derivative(const std::vector<Mat2>& m, int l1, int l2, int axis,
                                    double spacing) {
  std::vector<Mat2> out(m.size());
  for (std::size_t e = 0; e < 4; ++e) {
    std::vector<Complex> comp(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) comp[i] = m[i].m[e];
    comp = spectral_derivative(std::move(comp), l1, l2, axis, spacing);
    for (std::size_t i = 0; i < m.size(); ++i) out[i].m[e] = comp[i];
  }
  return out;
}

}  // namespace

HamiltonianField build_hamiltonian(const spin::AngleProvider& provider, long j,
                                   const spin::WalkParams& params, int l1, int l2) {
  params.validate();
  HamiltonianField h;
  h.l1 = l1;
  h.l2 = l2;
  h.spacing = params.epsilon / 2;
  const auto n = static_cast<std::size_t>(l1) * static_cast<std::size_t>(l2);
  h.b1.resize(n);
  h.b2.resize(n);
  h.mass_term.resize(n);
  for (int p1 = 0; p1 < l1; ++p1)
    for (int p2 = 0; p2 < l2; ++p2) {
      const std::size_t i = static_cast<std::size_t>(p1) * static_cast<std::size_t>(l2) +
                            static_cast<std::size_t>(p2);
      const auto [b1, b2] = b_matrices(provider(j, p1, p2));
      h.b1[i] = b1;
      h.b2[i] = b2;
      h.mass_term[i] = params.mass - spin::t_epsilon(provider, j, p1, p2, params) / 4;
    }
  h.db1 = matrix_derivative(h.b1, l1, l2, 1, h.spacing);
  h.db2 = matrix_derivative(h.b2, l1, l2, 2, h.spacing);
  return h;
}

SpinorField hamiltonian_apply(const SpinorField& field, const HamiltonianField& h) {
  if (field.l1() != h.l1 || field.l2() != h.l2)
    throw ConfigError("field and Hamiltonian coefficients have different lattice shapes");
  const auto src = field.sites();
  std::vector<Complex> minus(src.size()), plus(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    minus[i] = src[i].minus;
    plus[i] = src[i].plus;
  }
  const auto dm1 = spectral_derivative(minus, h.l1, h.l2, 1, h.spacing);
  const auto dp1 = spectral_derivative(plus, h.l1, h.l2, 1, h.spacing);
  const auto dm2 = spectral_derivative(minus, h.l1, h.l2, 2, h.spacing);
  const auto dp2 = spectral_derivative(plus, h.l1, h.l2, 2, h.spacing);

  SpinorField out(h.l1, h.l2);
  auto dst = out.sites();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Spinor2 d1{dm1[i], dp1[i]};
    const Spinor2 d2{dm2[i], dp2[i]};
    Spinor2 kinetic = h.b1[i] * d1 + h.b2[i] * d2 + Complex{0.5} * (h.db1[i] * src[i]) +
                      Complex{0.5} * (h.db2[i] * src[i]);
    kinetic *= -kI;
    const Spinor2 mass{h.mass_term[i] * src[i].plus, h.mass_term[i] * src[i].minus};
    dst[i] = kinetic + mass;
  }
  return out;
}

double spectral_tail_fraction(const SpinorField& field) {
  const auto modes = spectral::dft_field(field);
  double total = 0.0;
  double tail = 0.0;
  for (int n1 = 0; n1 < field.l1(); ++n1)
    for (int n2 = 0; n2 < field.l2(); ++n2) {
      const double w = modes.at(n1, n2).norm2();
      total += w;
      if (std::abs(spectral::wavenumber(n1, field.l1())) > kPi / 2 ||
          std::abs(spectral::wavenumber(n2, field.l2())) > kPi / 2)
        tail += w;
    }
  return total > 0 ? tail / total : 0.0;
}

double continuum_residual(const spin::AngleProvider& provider, const spin::WalkParams& params,
                          const SpinorField& field, long j) {
  const double tail = spectral_tail_fraction(field);
  if (tail >= 1e-8) {
    std::ostringstream os;
    os << "continuum residual needs a bandlimited field; spectral tail fraction is " << tail;
    throw DomainError(os.str());
  }
  const auto h = build_hamiltonian(provider, j, params, field.l1(), field.l2());
  const auto stepped = spin::step(field, j, provider, params);
  const auto hpsi = hamiltonian_apply(field, h);
  double num = 0.0;
  const auto a = stepped.sites();
  const auto b = field.sites();
  const auto c = hpsi.sites();
  for (std::size_t i = 0; i < a.size(); ++i) {
    Spinor2 r = a[i] - b[i];
    r += (kI * params.epsilon) * c[i];
    num += r.norm2();
  }
  return std::sqrt(num / field.norm2());
}

std::string to_string(ContinuumCase c) {
  switch (c) {
    case ContinuumCase::kFlat: return "flat";
    case ContinuumCase::kPureShear: return "pure_shear";
    case ContinuumCase::kMassive: return "massive";
    case ContinuumCase::kCurved: return "curved";
  }
  return "?";
}

namespace {

struct CaseSetup {
  spin::AngleProvider provider;
  spin::WalkParams params;
  SpinorField field;
};

CaseSetup make_case(ContinuumCase which, double eps, double box, spin::MassGate gate) {
  const int l = 2 * static_cast<int>(std::lround(box / eps));
  const double h = eps / 2;
  const double kappa = 2 * kPi / (l * h);  // one wavelength across the box
  spin::WalkParams params{eps, 0.0, 0.0, gate};
  SpinorField field(l, l);
  auto smooth = [&] {
    for (int p1 = 0; p1 < l; ++p1)
      for (int p2 = 0; p2 < l; ++p2) {
        const double x = p1 * h;
        const double y = p2 * h;
        field.at(p1, p2) = {std::exp(kI * (kappa * x)) * (1.0 + 0.3 * std::cos(kappa * y)),
                            0.5 * std::exp(-kI * (kappa * y)) + kI * (0.2 * std::sin(kappa * x))};
      }
  };
  switch (which) {
    case ContinuumCase::kFlat:
      smooth();
      return {spin::AngleProvider::flat(), params, field};
    case ContinuumCase::kPureShear: {
      smooth();
      AngleSet a;
      a.t12 = a.t21 = kPi / 2 - 1e-3;
      return {spin::AngleProvider::constant(a), params, field};
    }
    case ContinuumCase::kMassive:
      params.mass = 0.5;
      for (auto& s : field.sites()) s = {Complex{0.8}, Complex{0.0, 0.6}};
      return {spin::AngleProvider::flat(), params, field};
    case ContinuumCase::kCurved: {
      smooth();
      params.mass = 0.5;
      auto provider = spin::AngleProvider(
          [eps, h, kappa](long j, int p1, int p2) {
            const double t = static_cast<double>(j) * eps;
            const double x = p1 * h;
            const double y = p2 * h;
            AngleSet a;
            a.t11 = 0.3 + 0.2 * std::sin(kappa * x) + 0.1 * std::sin(t);
            a.t22 = 0.4 + 0.1 * std::cos(kappa * (x + y));
            a.t12 = kPi / 2 - 0.2 * std::cos(kappa * y) - 0.1 * std::cos(2 * t);
            a.t21 = kPi / 2 - 0.15 * std::sin(kappa * x);
            return a;
          },
          false);
      return {provider, params, field};
    }
  }
  throw ConfigError("unknown continuum case");
}

}  // namespace

ResidualScan residual_scan(ContinuumCase which, std::span<const double> epsilons,
                           double box_length, spin::MassGate gate, int threads) {
  ResidualScan scan;
  scan.which = which;
  scan.points.resize(epsilons.size());
  parallel_for(epsilons.size(), threads, [&](std::size_t i) {
    const auto setup = make_case(which, epsilons[i], box_length, gate);
    scan.points[i] = {epsilons[i],
                      continuum_residual(setup.provider, setup.params, setup.field, 0)};
  });
  std::vector<double> xs, ys;
  for (const auto& p : scan.points) {
    xs.push_back(p.epsilon);
    ys.push_back(p.residual);
  }
  scan.slope = loglog_slope(xs, ys);
  return scan;
}

}  // namespace qwgw::continuum
