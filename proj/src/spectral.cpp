#include "qwgw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fft.hpp"
#include "qwgw/csv.hpp"
#include "qwgw/parallel.hpp"
#include "qwgw/search.hpp"

namespace qwgw::spectral {

namespace {

constexpr double kTwoPi = 2 * kPi;
constexpr double kFourPi = 4 * kPi;

spin::SpinorField transform(const spin::SpinorField& in, int sign) {
  const int l1 = in.l1();
  const int l2 = in.l2();
  std::vector<Complex> minus(in.size());
  std::vector<Complex> plus(in.size());
  const auto src = in.sites();
  for (std::size_t i = 0; i < src.size(); ++i) {
    minus[i] = src[i].minus;
    plus[i] = src[i].plus;
  }
  detail::fft2(minus, l1, l2, sign);
  detail::fft2(plus, l1, l2, sign);
  const double scale = 1.0 / std::sqrt(static_cast<double>(l1) * static_cast<double>(l2));
  spin::SpinorField out(l1, l2);
  auto dst = out.sites();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = {minus[i] * scale, plus[i] * scale};
  return out;
}

Mat2 shift_symbol(double k) { return Mat2::diag(std::exp(kI * k), std::exp(-kI * k)); }

Mat2 block_symbol(double theta, double k) {
  const Mat2 r = spin::coin_r(theta);
  const Mat2 u = spin::coin_u(theta);
  const Mat2 s = shift_symbol(k);
  return r.adjoint() * u * s * u * s * r;
}

// Wraps a coordinate into [-2pi, 2pi).
double wrap_zone(double q) {
  double w = std::fmod(q + kTwoPi, kFourPi);
  if (w < 0) w += kFourPi;
  return w - kTwoPi;
}

}  // namespace

double wavenumber(int n, int l) {
  const int folded = n < l / 2 ? n : n - l;
  return kTwoPi * folded / l;
}

spin::SpinorField dft_field(const spin::SpinorField& field) { return transform(field, -1); }

spin::SpinorField idft_field(const spin::SpinorField& modes) { return transform(modes, +1); }

Mat2 transfer_matrix(const AngleSet& a, const spin::WalkParams& params, double t_eps,
                     ModePoint q) {
  const double k1 = q.qx / 2;
  const double k2 = q.qy / 2;
  const Mat2 gate = spin::mass_gate(params.epsilon, params.mass - t_eps / 4, params.mass_gate);
  return spin::pi_inverse() * block_symbol(a.t12, k1) * block_symbol(a.t22, k2) *
         spin::pi_matrix() * block_symbol(a.t21, k2) * block_symbol(a.t11, k1) * gate;
}

Mat2 assembled_operator(double xi, double g, ModePoint q) {
  AngleSet a;
  a.t12 = kPi / 2 - xi * g;
  a.t21 = a.t12;
  return transfer_matrix(a, spin::WalkParams{}, 0.0, q);
}

ShearCoefficients shear_coefficients(ModePoint q) {
  const double x = q.qx;
  const double y = q.qy;
  const Complex a_bar{-std::cos(x - y) + std::cos(y) - std::sin(y) + std::sin(2 * y),
                      -std::cos(x + y) + std::cos(y) + std::sin(y)};
  const Complex b_bar{std::sin(x + y) - std::sin(y) + std::cos(y) - std::cos(2 * y),
                      std::sin(x - y) + std::sin(y) + std::cos(y) - 1.0};
  const double h = 1.0 / std::sqrt(2.0);
  return {h * std::exp(kI * (kPi / 4)) * a_bar, h * std::exp(-kI * (kPi / 4)) * b_bar, a_bar,
          b_bar};
}

Mat2 mode_w0(ModePoint q) {
  const Complex ex = std::exp(kI * q.qx);
  const Complex emx = std::exp(-kI * q.qx);
  const double c = std::cos(q.qy);
  const double s = std::sin(q.qy);
  return {{ex * c, -emx * s, ex * s, emx * c}};
}

Mat2 mode_w1(ModePoint q) {
  const auto co = shear_coefficients(q);
  const Complex ex = std::exp(kI * q.qx);
  const Complex emx = std::exp(-kI * q.qx);
  return {{ex * co.a, -emx * co.b, ex * std::conj(co.b), emx * std::conj(co.a)}};
}

double rho(ModePoint q) {
  const auto co = shear_coefficients(q);
  return std::sqrt(std::norm(co.a) + std::norm(co.b));
}

double rho_bar(ModePoint q) {
  const auto co = shear_coefficients(q);
  return std::sqrt(std::norm(co.a_bar) + std::norm(co.b_bar));
}

std::vector<RhoMaximum> find_rho_maxima(int resolution, int threads) {
  if (resolution < 256) throw DomainError("find_rho_maxima needs a resolution of at least 256");
  const int n = resolution;
  const double h = kFourPi / n;
  auto coord = [&](int i) { return -kTwoPi + h * i; };
  std::vector<double> grid(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ix) {
    for (int iy = 0; iy < n; ++iy)
      grid[ix * static_cast<std::size_t>(n) + static_cast<std::size_t>(iy)] =
          rho({coord(static_cast<int>(ix)), coord(iy)});
  });
  auto at = [&](int ix, int iy) {
    ix = spin::SpinorField::wrap(ix, n);
    iy = spin::SpinorField::wrap(iy, n);
    return grid[static_cast<std::size_t>(ix) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(iy)];
  };

  std::vector<std::array<int, 2>> seeds;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double v = at(ix, iy);
      bool peak = true;
      for (int dx = -1; dx <= 1 && peak; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          if ((dx || dy) && at(ix + dx, iy + dy) > v) {
            peak = false;
            break;
          }
      if (peak) seeds.push_back({ix, iy});
    }

  std::vector<SearchResult> refined(seeds.size());
  const Box2 unbounded{{-3 * kTwoPi, -3 * kTwoPi}, {3 * kTwoPi, 3 * kTwoPi}};
  parallel_for(seeds.size(), threads, [&](std::size_t s) {
    refined[s] = compass_maximize([](double x, double y) { return rho({x, y}); },
                                  {coord(seeds[s][0]), coord(seeds[s][1])}, h, 1e-8, unbounded);
  });

  double best = 0.0;
  for (const auto& r : refined) best = std::max(best, r.value);
  std::vector<ModePoint> found;
  for (const auto& r : refined)
    if (r.value >= best - 1e-9) found.push_back({wrap_zone(r.x[0]), wrap_zone(r.x[1])});
  found = distinct_modulo_zone(found);
  std::sort(found.begin(), found.end(), [](const ModePoint& a, const ModePoint& b) {
    return std::tie(a.qx, a.qy) < std::tie(b.qx, b.qy);
  });
  std::vector<RhoMaximum> out;
  out.reserve(found.size());
  for (const auto& p : found) out.push_back({p, rho(p), rho_bar(p)});
  return out;
}

std::vector<ModePoint> unaffected_modes(double tolerance, int resolution, int threads) {
  if (!(tolerance > 0)) throw DomainError("unaffected_modes needs a positive tolerance");
  if (resolution < 16 || resolution % 4 != 0)
    throw DomainError("unaffected_modes needs a resolution that is a multiple of 4, >= 16");
  const int n = resolution + 1;  // closed box: both ends included
  const double h = kFourPi / resolution;
  auto coord = [&](int i) { return -kTwoPi + h * i; };
  auto cost = [](double x, double y) {
    const auto co = shear_coefficients({x, y});
    return std::norm(co.a) + std::norm(co.b);
  };
  std::vector<double> grid(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ix) {
    for (int iy = 0; iy < n; ++iy)
      grid[ix * static_cast<std::size_t>(n) + static_cast<std::size_t>(iy)] =
          cost(coord(static_cast<int>(ix)), coord(iy));
  });
  auto at = [&](int ix, int iy) {
    return grid[static_cast<std::size_t>(ix) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(iy)];
  };
  std::vector<std::array<int, 2>> seeds;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy) {
      const double v = at(ix, iy);
      bool pit = true;
      for (int dx = -1; dx <= 1 && pit; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          const int jx = ix + dx;
          const int jy = iy + dy;
          if ((dx || dy) && jx >= 0 && jx < n && jy >= 0 && jy < n && at(jx, jy) < v) {
            pit = false;
            break;
          }
        }
      if (pit) seeds.push_back({ix, iy});
    }

  const Box2 box{{-kTwoPi, -kTwoPi}, {kTwoPi, kTwoPi}};
  std::vector<SearchResult> refined(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t s) {
    refined[s] = compass_maximize([](double x, double y) { return -rho({x, y}); },
                                  {coord(seeds[s][0]), coord(seeds[s][1])}, h, 1e-13, box);
  });
  std::vector<ModePoint> zeros;
  for (const auto& r : refined) {
    if (-r.value >= tolerance) continue;
    const ModePoint p{r.x[0], r.x[1]};
    const bool dup = std::any_of(zeros.begin(), zeros.end(), [&](const ModePoint& z) {
      return std::hypot(z.qx - p.qx, z.qy - p.qy) < 1e-6;
    });
    if (!dup) zeros.push_back(p);
  }
  std::sort(zeros.begin(), zeros.end(), [](const ModePoint& a, const ModePoint& b) {
    return std::tie(a.qx, a.qy) < std::tie(b.qx, b.qy);
  });
  return zeros;
}

std::vector<ModePoint> distinct_modulo_zone(const std::vector<ModePoint>& points, double tol) {
  auto periodic_gap = [](double a, double b) {
    const double d = std::fmod(std::abs(a - b), kFourPi);
    return std::min(d, kFourPi - d);
  };
  std::vector<ModePoint> out;
  for (const auto& p : points) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const ModePoint& o) {
      return periodic_gap(o.qx, p.qx) < tol && periodic_gap(o.qy, p.qy) < tol;
    });
    if (!dup) out.push_back(p);
  }
  return out;
}

double energy_of(Complex eigenvalue) {
  const double e = -std::arg(eigenvalue);
  return e <= -kPi ? e + 2 * kPi : e;
}

namespace {

Spinor2 normalized_with_phase(Spinor2 v) {
  const double n = std::sqrt(v.norm2());
  v *= Complex{1.0 / n};
  const Complex lead = std::abs(v.minus) > 1e-14 ? v.minus : v.plus;
  v *= std::conj(lead) / std::abs(lead);
  // pin exact zeros left by the phase rotation
  if (std::abs(v.minus) > 1e-14) v.minus = Complex{v.minus.real(), 0.0};
  else v.plus = Complex{v.plus.real(), 0.0};
  return v;
}

Spinor2 eigenvector_for(const Mat2& m, Complex lambda) {
  // rows of (M - lambda) annihilate the eigenvector; take the better conditioned one
  const Spinor2 from_first{m(0, 1), lambda - m(0, 0)};
  const Spinor2 from_second{lambda - m(1, 1), m(1, 0)};
  return from_first.norm2() >= from_second.norm2() ? from_first : from_second;
}

}  // namespace

Eigensystem eigen(const Mat2& m) {
  const Complex half_trace = m.trace() / 2.0;
  const Complex half_gap = (m(0, 0) - m(1, 1)) / 2.0;
  const Complex s = std::sqrt(half_gap * half_gap + m(0, 1) * m(1, 0));
  const double scale = std::max(1.0, max_abs(m));
  Eigensystem out;
  if (std::abs(s) <= 1e-12 * scale) {
    const Complex lambda = half_trace;
    const bool scalar = std::abs(m(0, 1)) <= 1e-12 * scale && std::abs(m(1, 0)) <= 1e-12 * scale;
    if (scalar) {
      out.pairs.push_back({lambda, {Complex{1.0}, Complex{}}, energy_of(lambda)});
      out.pairs.push_back({lambda, {Complex{}, Complex{1.0}}, energy_of(lambda)});
    } else {
      out.defective = true;
      out.pairs.push_back(
          {lambda, normalized_with_phase(eigenvector_for(m, lambda)), energy_of(lambda)});
    }
    return out;
  }
  for (const Complex lambda : {half_trace + s, half_trace - s})
    out.pairs.push_back(
        {lambda, normalized_with_phase(eigenvector_for(m, lambda)), energy_of(lambda)});
  std::sort(out.pairs.begin(), out.pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    if (std::abs(a.energy - b.energy) > 1e-14) return a.energy < b.energy;
    return std::make_tuple(a.eigenvector.minus.real(), a.eigenvector.minus.imag(),
                           a.eigenvector.plus.real(), a.eigenvector.plus.imag()) <
           std::make_tuple(b.eigenvector.minus.real(), b.eigenvector.minus.imag(),
                           b.eigenvector.plus.real(), b.eigenvector.plus.imag());
  });
  return out;
}

Mat2 large_scale_operator(double xi, double g, ModePoint q) {
  const double a = q.qx + xi * g * q.qy;
  const double b = q.qy + xi * g * q.qx;
  return {{Complex{1.0, a}, Complex{-b}, Complex{b}, Complex{1.0, -a}}};
}

PerturbativeEigs perturbative_eigs(double xi, double g, ModePoint q) {
  const double n = std::hypot(q.qx, q.qy);
  if (n == 0.0) throw DomainError("perturbative eigenvectors are undefined at |q| = 0");
  if (q.qx <= 0.0)
    throw DomainError("closed-form eigenvectors are only available for qx > 0; use eigen()");
  const double xg = xi * g;
  const double stretch = 1.0 + 2.0 * xg * q.qx * q.qy / (n * n);
  PerturbativeEigs out;
  out.lambda_plus = Complex{1.0, -stretch * n};
  out.lambda_minus = Complex{1.0, stretch * n};
  out.energy_plus = stretch * n;
  out.energy_minus = -stretch * n;
  const double denom = q.qx + n;
  out.v0_plus = {Complex{0.0, -q.qy / denom}, Complex{1.0}};
  const double bracket = q.qx - q.qy * q.qy * (1.0 + 2.0 * q.qx / n) / denom;
  out.v1_plus = {Complex{0.0, -bracket / denom}, Complex{}};
  return out;
}

std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::kRho: return "rho";
    case GridKind::kRhoBar: return "rho_bar";
    case GridKind::kEnergyPlus: return "energy_plus";
    case GridKind::kEnergyMinus: return "energy_minus";
  }
  return "?";
}

GridKind grid_kind_from_string(const std::string& name) {
  for (auto k : {GridKind::kRho, GridKind::kRhoBar, GridKind::kEnergyPlus, GridKind::kEnergyMinus})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown spectrum kind '" + name +
                    "' (expected rho, rho_bar, energy_plus or energy_minus)");
}

ModePoint SpectrumGrid::point(int ix, int iy) const {
  const double h = kFourPi / resolution;
  return {-kTwoPi + h * ix, -kTwoPi + h * iy};
}

SpectrumGrid spectrum_grid(GridKind kind, int resolution, double xi, double g, int threads) {
  if (resolution < 2) throw DomainError("spectrum resolution must be at least 2");
  SpectrumGrid grid;
  grid.resolution = resolution;
  grid.kind = kind;
  const auto n = static_cast<std::size_t>(resolution);
  grid.values.resize(n * n);
  parallel_for(n, threads, [&](std::size_t ix) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      const ModePoint q = grid.point(static_cast<int>(ix), static_cast<int>(iy));
      double v = 0.0;
      switch (kind) {
        case GridKind::kRho: v = rho(q); break;
        case GridKind::kRhoBar: v = rho_bar(q); break;
        case GridKind::kEnergyPlus:
        case GridKind::kEnergyMinus: {
          const auto es = eigen(assembled_operator(xi, g, q));
          v = kind == GridKind::kEnergyPlus ? es.pairs.back().energy : es.pairs.front().energy;
          break;
        }
      }
      grid.values[ix * n + iy] = v;
    }
  });
  return grid;
}

void write_csv(const SpectrumGrid& grid, const std::string& path) {
  CsvWriter out(path, {"qX", "qY", "value"});
  for (int ix = 0; ix < grid.resolution; ++ix)
    for (int iy = 0; iy < grid.resolution; ++iy) {
      const auto q = grid.point(ix, iy);
      out.row({q.qx, q.qy, grid.at(ix, iy)});
    }
  out.close();
}

}  // namespace qwgw::spectral
