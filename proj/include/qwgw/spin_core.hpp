#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qwgw/types.hpp"

namespace qwgw::spin {

enum class CoinKind { kU, kR, kQ, kPi };

/// u(theta), r(theta), Q(M) = exp(-2 i M sigma_1), and the basis change Pi.
/// For kPi the argument is ignored.
Mat2 coin_matrix(CoinKind kind, double arg = 0.0);

Mat2 coin_u(double theta);
Mat2 coin_r(double theta);
Mat2 coin_q(double m);
Mat2 pi_matrix();
Mat2 pi_inverse();

enum class Axis { k1 = 1, k2 = 2 };

/// Walker state on a periodic L1 x L2 lattice with even extents. Site
/// (p1, p2) is stored at p1 * L2 + p2.
class SpinorField {
 public:
  SpinorField() = default;
  /// Throws ConfigError unless both extents are positive and even.
  SpinorField(int l1, int l2);

  int l1() const { return l1_; }
  int l2() const { return l2_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int p1, int p2) const {
    return static_cast<std::size_t>(wrap(p1, l1_)) * static_cast<std::size_t>(l2_) +
           static_cast<std::size_t>(wrap(p2, l2_));
  }
  /// Periodic access: any integer coordinates are accepted.
  Spinor2& at(int p1, int p2) { return data_[index(p1, p2)]; }
  const Spinor2& at(int p1, int p2) const { return data_[index(p1, p2)]; }

  std::span<Spinor2> sites() { return data_; }
  std::span<const Spinor2> sites() const { return data_; }

  /// Sum over sites of |psi^-|^2 + |psi^+|^2.
  double norm2() const;
  double norm() const;
  bool same_shape(const SpinorField& o) const { return l1_ == o.l1_ && l2_ == o.l2_; }

  friend bool operator==(const SpinorField&, const SpinorField&) = default;

  static int wrap(int p, int l) {
    const int r = p % l;
    return r < 0 ? r + l : r;
  }

 private:
  int l1_ = 0;
  int l2_ = 0;
  std::vector<Spinor2> data_;
};

/// <a, b> summed over sites and components.
Complex inner(const SpinorField& a, const SpinorField& b);
/// sqrt(sum |a - b|^2)
double distance(const SpinorField& a, const SpinorField& b);

/// Source of the four angle fields theta^{kl}(j, p1, p2). The evaluator must
/// be pure: the step calls it concurrently from worker threads and queries
/// time j + 1 for the mass-like term.
class AngleProvider {
 public:
  using Evaluator = std::function<AngleSet(long j, int p1, int p2)>;

  AngleProvider(Evaluator eval, bool uniform_in_space)
      : eval_(std::move(eval)), uniform_(uniform_in_space) {}

  AngleSet operator()(long j, int p1, int p2) const { return eval_(j, p1, p2); }
  double angle(long j, int p1, int p2, AngleIndex which) const {
    return angle_of(eval_(j, p1, p2), which);
  }
  bool uniform_in_space() const { return uniform_; }

  static AngleProvider flat();
  static AngleProvider constant(const AngleSet& angles);

 private:
  Evaluator eval_;
  bool uniform_;
};

/// How the mass-like phase M = eps (m - T_eps / 4) enters the Q gate.
///  - kContinuum applies exp(-i M sigma_1) = Q(M / 2): first order 1 - i eps
///    (m - T/4) sigma_1, which is what the Dirac Hamiltonian requires.
///  - kLiteral applies Q(M) = exp(-2 i M sigma_1) verbatim; its continuum
///    limit carries twice the mass.
enum class MassGate { kContinuum, kLiteral };

struct WalkParams {
  double epsilon = 1.0;
  double mass = 0.0;
  double xi = 0.0;
  MassGate mass_gate = MassGate::kContinuum;

  /// Throws ConfigError unless epsilon > 0, mass >= 0 and all are finite.
  void validate() const;
};

/// Gate actually applied for the mass phase `m_eff = m - T_eps / 4`.
Mat2 mass_gate(double epsilon, double m_eff, MassGate convention);

/// Spin-dependent shift S_k: psi^- pulled from p + 1, psi^+ from p - 1.
SpinorField shift_apply(const SpinorField& field, Axis axis);

/// R^-1(theta) [U(theta) S_k U(theta) S_k] R(theta) with site-local angles
/// `theta` laid out like the field.
SpinorField w_block_apply(const SpinorField& field, Axis axis, std::span<const double> theta);

/// Mass-like term T_eps from the cosine matrix C and its inverse, with the
/// forward time difference (K_{j+1} - K_j) / eps.
double t_epsilon(const AngleProvider& provider, long j, int p1, int p2,
                 const WalkParams& params);

/// Same quantity as -eps^{abc} eta_cd e^mu_(a) D_b e^(d)_mu summed over the
/// full 3x3 triads, with spatial differences taken along the lattice.
double t_epsilon_compact(const AngleProvider& provider, long j, int p1, int p2,
                         const WalkParams& params);

/// The spatial pieces K^i = eps^{ibc} e^mu_(b) eta_cd D_i e^(d)_mu, i = 1, 2,
/// using forward lattice differences with spacing eps / 2. They vanish for
/// every synchronous triad.
std::array<double, 2> spatial_mass_terms(const AngleProvider& provider, long j, int p1, int p2,
                                         const WalkParams& params);

/// One application of V_j. Order, rightmost first:
///   Pi^-1 [W1(theta12) W2(theta22)] Pi [W2(theta21) W1(theta11)] Q.
/// `threads` > 1 splits site loops over workers; results do not depend on it.
SpinorField step(const SpinorField& field, long j, const AngleProvider& provider,
                 const WalkParams& params, int threads = 1);

/// n steps starting at time j0.
SpinorField evolve(const SpinorField& field, long j0, long n, const AngleProvider& provider,
                   const WalkParams& params, int threads = 1);

}  // namespace qwgw::spin
