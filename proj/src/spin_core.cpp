#include "qwgw/spin_core.hpp"

#include <cmath>
#include <sstream>

#include "qwgw/geometry.hpp"
#include "qwgw/parallel.hpp"

namespace qwgw::spin {

Mat2 coin_u(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {{Complex{-c}, kI * s, -kI * s, Complex{c}}};
}

Mat2 coin_r(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {{kI * c, kI * s, Complex{-s}, Complex{c}}};
}

Mat2 coin_q(double m) {
  const double c = std::cos(2 * m);
  const double s = std::sin(2 * m);
  return {{Complex{c}, -kI * s, -kI * s, Complex{c}}};
}

Mat2 pi_matrix() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{-kI * h, Complex{h}, Complex{-h}, kI * h}};
}

Mat2 pi_inverse() { return pi_matrix().adjoint(); }

Mat2 coin_matrix(CoinKind kind, double arg) {
  switch (kind) {
    case CoinKind::kU: return coin_u(arg);
    case CoinKind::kR: return coin_r(arg);
    case CoinKind::kQ: return coin_q(arg);
    case CoinKind::kPi: return pi_matrix();
  }
  return Mat2::identity();
}

SpinorField::SpinorField(int l1, int l2) : l1_(l1), l2_(l2) {
  if (l1 <= 0 || l2 <= 0 || l1 % 2 != 0 || l2 % 2 != 0) {
    std::ostringstream os;
    os << "lattice extents must be positive and even, got " << l1 << "x" << l2;
    throw ConfigError(os.str());
  }
  data_.resize(static_cast<std::size_t>(l1) * static_cast<std::size_t>(l2));
}

double SpinorField::norm2() const {
  double s = 0.0;
  for (const auto& x : data_) s += x.norm2();
  return s;
}

double SpinorField::norm() const { return std::sqrt(norm2()); }

Complex inner(const SpinorField& a, const SpinorField& b) {
  Complex s{};
  const auto sa = a.sites();
  const auto sb = b.sites();
  for (std::size_t i = 0; i < sa.size(); ++i)
    s += std::conj(sa[i].minus) * sb[i].minus + std::conj(sa[i].plus) * sb[i].plus;
  return s;
}

double distance(const SpinorField& a, const SpinorField& b) {
  double s = 0.0;
  const auto sa = a.sites();
  const auto sb = b.sites();
  for (std::size_t i = 0; i < sa.size(); ++i) s += (sa[i] - sb[i]).norm2();
  return std::sqrt(s);
}

AngleProvider AngleProvider::flat() { return constant(AngleSet::flat()); }

AngleProvider AngleProvider::constant(const AngleSet& angles) {
  return AngleProvider([angles](long, int, int) { return angles; }, true);
}

void WalkParams::validate() const {
  if (!(std::isfinite(epsilon) && epsilon > 0.0))
    throw ConfigError("epsilon must be a positive finite number");
  if (!(std::isfinite(mass) && mass >= 0.0))
    throw ConfigError("mass must be a nonnegative finite number");
  if (!std::isfinite(xi)) throw ConfigError("xi must be finite");
}

Mat2 mass_gate(double epsilon, double m_eff, MassGate convention) {
  const double phase = epsilon * m_eff;
  return convention == MassGate::kLiteral ? coin_q(phase) : coin_q(phase / 2);
}

namespace {

// Per-site (or single, when the angles are uniform) matrices.
struct SiteMatrices {
  std::vector<Mat2> m;
  const Mat2& at(std::size_t i) const { return m.size() == 1 ? m[0] : m[i]; }
};

SpinorField apply_pointwise(const SpinorField& in, const SiteMatrices& mats, int threads) {
  SpinorField out = in;
  const auto src = in.sites();
  auto dst = out.sites();
  const auto rows = static_cast<std::size_t>(in.l1());
  const auto cols = static_cast<std::size_t>(in.l2());
  parallel_for(rows, threads, [&](std::size_t r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      dst[i] = mats.at(i) * src[i];
    }
  });
  return out;
}

SpinorField apply_uniform(const SpinorField& in, const Mat2& m, int threads) {
  return apply_pointwise(in, SiteMatrices{{m}}, threads);
}

SpinorField shift(const SpinorField& in, Axis axis, int threads) {
  SpinorField out = in;
  const int dp1 = axis == Axis::k1 ? 1 : 0;
  const int dp2 = axis == Axis::k2 ? 1 : 0;
  parallel_for(static_cast<std::size_t>(in.l1()), threads, [&](std::size_t r) {
    const int p1 = static_cast<int>(r);
    for (int p2 = 0; p2 < in.l2(); ++p2) {
      Spinor2& o = out.at(p1, p2);
      o.minus = in.at(p1 + dp1, p2 + dp2).minus;
      o.plus = in.at(p1 - dp1, p2 - dp2).plus;
    }
  });
  return out;
}

struct BlockMatrices {
  SiteMatrices r, u, r_inv;
};

BlockMatrices block_matrices(std::span<const double> theta) {
  BlockMatrices b;
  b.r.m.reserve(theta.size());
  b.u.m.reserve(theta.size());
  b.r_inv.m.reserve(theta.size());
  for (double t : theta) {
    const Mat2 r = coin_r(t);
    b.r.m.push_back(r);
    b.u.m.push_back(coin_u(t));
    b.r_inv.m.push_back(r.adjoint());
  }
  return b;
}

SpinorField apply_block(const SpinorField& in, Axis axis, const BlockMatrices& b, int threads) {
  SpinorField f = apply_pointwise(in, b.r, threads);
  f = shift(f, axis, threads);
  f = apply_pointwise(f, b.u, threads);
  f = shift(f, axis, threads);
  f = apply_pointwise(f, b.u, threads);
  return apply_pointwise(f, b.r_inv, threads);
}

using Mat2r = std::array<std::array<double, 2>, 2>;

Mat2r inverse_or_throw(const Mat2r& c, long j, int p1, int p2) {
  const double det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
  if (!(std::abs(det) >= 1e-10)) {
    std::ostringstream os;
    os << "singular cosine matrix [cos theta^kl] at time j=" << j << ", site (" << p1 << ", "
       << p2 << "): |det| = " << std::abs(det) << " < 1e-10";
    throw GeometryError(os.str());
  }
  return {{{c[1][1] / det, -c[0][1] / det}, {-c[1][0] / det, c[0][0] / det}}};
}

geometry::DualTriad dual_at(const AngleProvider& provider, long j, int p1, int p2) {
  const auto triad = geometry::triad_from_angles(provider(j, p1, p2));
  inverse_or_throw({{{triad.e[1][1], triad.e[1][2]}, {triad.e[2][1], triad.e[2][2]}}}, j, p1,
                   p2);
  return geometry::dual_triad(triad);
}

}  // namespace

SpinorField shift_apply(const SpinorField& field, Axis axis) { return shift(field, axis, 1); }

SpinorField w_block_apply(const SpinorField& field, Axis axis, std::span<const double> theta) {
  if (theta.size() != field.size() && theta.size() != 1)
    throw ConfigError("angle slice size does not match the lattice");
  return apply_block(field, axis, block_matrices(theta), 1);
}

double t_epsilon(const AngleProvider& provider, long j, int p1, int p2,
                 const WalkParams& params) {
  const Mat2r c_now = geometry::cosine_matrix(provider(j, p1, p2));
  const Mat2r c_next = geometry::cosine_matrix(provider(j + 1, p1, p2));
  const Mat2r inv_now = inverse_or_throw(c_now, j, p1, p2);
  const Mat2r inv_next = inverse_or_throw(c_next, j + 1, p1, p2);
  double t = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double d_1k = (inv_next[0][k] - inv_now[0][k]) / params.epsilon;
    const double d_2k = (inv_next[1][k] - inv_now[1][k]) / params.epsilon;
    t += c_now[k][1] * d_1k - c_now[k][0] * d_2k;
  }
  return t;
}

double t_epsilon_compact(const AngleProvider& provider, long j, int p1, int p2,
                         const WalkParams& params) {
  using geometry::kEta;
  using geometry::levi_civita;
  const auto triad = geometry::triad_from_angles(provider(j, p1, p2));
  const auto dual_now = dual_at(provider, j, p1, p2);
  const auto dual_next = dual_at(provider, j + 1, p1, p2);
  const auto dual_x = dual_at(provider, j, p1 + 1, p2);
  const auto dual_y = dual_at(provider, j, p1, p2 + 1);
  const double h = params.epsilon / 2;

  // D_b e^(d)_mu: forward differences in time and along both lattice axes.
  auto diff = [&](int b, int d, int mu) {
    switch (b) {
      case 0: return (dual_next.d[d][mu] - dual_now.d[d][mu]) / params.epsilon;
      case 1: return (dual_x.d[d][mu] - dual_now.d[d][mu]) / h;
      default: return (dual_y.d[d][mu] - dual_now.d[d][mu]) / h;
    }
  };

  double t = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const int eps = levi_civita(a, b, c);
        if (eps == 0) continue;
        for (int d = 0; d < 3; ++d) {
          if (kEta[c][d] == 0.0) continue;
          for (int mu = 0; mu < 3; ++mu)
            t -= eps * kEta[c][d] * triad.e[mu][a] * diff(b, d, mu);
        }
      }
  return t;
}

std::array<double, 2> spatial_mass_terms(const AngleProvider& provider, long j, int p1, int p2,
                                         const WalkParams& params) {
  using geometry::kEta;
  using geometry::levi_civita;
  const auto triad = geometry::triad_from_angles(provider(j, p1, p2));
  const auto dual_now = dual_at(provider, j, p1, p2);
  const std::array<geometry::DualTriad, 2> shifted{dual_at(provider, j, p1 + 1, p2),
                                                   dual_at(provider, j, p1, p2 + 1)};
  const double h = params.epsilon / 2;
  std::array<double, 2> k{};
  for (int i = 1; i <= 2; ++i) {
    const auto& next = shifted[static_cast<std::size_t>(i - 1)];
    double s = 0.0;
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const int eps = levi_civita(i, b, c);
        if (eps == 0) continue;
        for (int d = 0; d < 3; ++d)
          for (int mu = 0; mu < 3; ++mu)
            s += eps * triad.e[mu][b] * kEta[c][d] * (next.d[d][mu] - dual_now.d[d][mu]) / h;
      }
    k[static_cast<std::size_t>(i - 1)] = s;
  }
  return k;
}

SpinorField step(const SpinorField& field, long j, const AngleProvider& provider,
                 const WalkParams& params, int threads) {
  params.validate();
  const bool uniform = provider.uniform_in_space();
  const std::size_t n = uniform ? 1 : field.size();
  const auto cols = static_cast<std::size_t>(field.l2());

  std::vector<AngleSet> angles(n);
  SiteMatrices gate;
  gate.m.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const int p1 = static_cast<int>(i / cols);
    const int p2 = static_cast<int>(i % cols);
    angles[i] = provider(j, p1, p2);
    const double t = t_epsilon(provider, j, p1, p2, params);
    gate.m[i] = mass_gate(params.epsilon, params.mass - t / 4, params.mass_gate);
  });

  auto slice = [&](AngleIndex which) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = angle_of(angles[i], which);
    return block_matrices(s);
  };

  SpinorField f = apply_pointwise(field, gate, threads);
  f = apply_block(f, Axis::k1, slice(AngleIndex::k11), threads);
  f = apply_block(f, Axis::k2, slice(AngleIndex::k21), threads);
  f = apply_uniform(f, pi_matrix(), threads);
  f = apply_block(f, Axis::k2, slice(AngleIndex::k22), threads);
  f = apply_block(f, Axis::k1, slice(AngleIndex::k12), threads);
  return apply_uniform(f, pi_inverse(), threads);
}

SpinorField evolve(const SpinorField& field, long j0, long n, const AngleProvider& provider,
                   const WalkParams& params, int threads) {
  if (n < 0) throw ConfigError("number of steps must be nonnegative");
  SpinorField f = field;
  for (long s = 0; s < n; ++s) f = step(f, j0 + s, provider, params, threads);
  return f;
}

}  // namespace qwgw::spin
