#include "qwgw/interference.hpp"

#include <cmath>
#include <sstream>

#include "qwgw/csv.hpp"
#include "qwgw/parallel.hpp"
#include "qwgw/search.hpp"

namespace qwgw::interference {

namespace {

const double kSqrt2 = std::sqrt(2.0);

bool fits(double q, int l) {
  const double n = q * l / (4 * kPi);
  return std::abs(n - std::round(n)) <= 1e-9 * std::max(1.0, n);
}

}  // namespace

void InterferenceSetup::validate() const {
  if (l1 <= 0 || l2 <= 0 || l1 % 2 != 0 || l2 % 2 != 0) {
    std::ostringstream os;
    os << "lattice: sides must be positive and even, got " << l1 << " x " << l2;
    throw ConfigError(os.str());
  }
  if (!std::isfinite(q) || q <= 0) throw ConfigError("q: must be finite and positive");
  if (!std::isfinite(xi) || !std::isfinite(g0)) throw ConfigError("xi, g0: must be finite");
  for (int l : {l1, l2}) {
    if (!fits(q, l)) {
      std::ostringstream os;
      os.precision(17);
      os << "q: " << q << " does not fit a side of " << l
         << " sites (need q = 4 pi n / L); nearest admissible q is "
         << nearest_admissible_q(q, l);
      throw ConfigError(os.str());
    }
  }
}

double nearest_admissible_q(double q, int l) {
  const double n = std::max(1.0, std::round(q * l / (4 * kPi)));
  return 4 * kPi * n / l;
}

spin::SpinorField initial_superposition(const InterferenceSetup& setup) {
  setup.validate();
  spin::SpinorField field(setup.l1, setup.l2);
  // q = 4 pi n / L, so q p / 2 = 2 pi (n p mod L) / L; reducing the integer
  // product first keeps the phases accurate to a few ulp on large lattices.
  auto phase = [&](int p, int l) {
    const auto n = static_cast<long>(std::llround(setup.q * l / (4 * kPi)));
    const long m = (n * p) % l;
    return std::exp(kI * (2 * kPi * static_cast<double>(m) / l));
  };
  for (int px = 0; px < setup.l1; ++px)
    for (int py = 0; py < setup.l2; ++py) {
      const Complex ex = phase(px, setup.l1);
      const Complex ey = phase(py, setup.l2);
      field.at(px, py) = {(-kI / kSqrt2) * ey, ex + ey / kSqrt2};
    }
  return field;
}

double initial_density(double q, double u) { return 2 + kSqrt2 * std::cos(q * u / 2); }

std::vector<double> density_after_step(const InterferenceSetup& setup, int threads) {
  const auto psi0 = initial_superposition(setup);
  AngleSet angles;
  angles.t12 = angles.t21 = kPi / 2 - setup.xi * setup.g0;
  spin::WalkParams params;
  params.xi = setup.xi;
  const auto psi1 =
      spin::step(psi0, 0, spin::AngleProvider::constant(angles), params, threads);
  std::vector<double> out;
  out.reserve(psi1.size());
  for (const auto& s : psi1.sites()) out.push_back(s.norm2());
  return out;
}

DeltaSimulation simulate_delta(const InterferenceSetup& setup, int threads) {
  const double amplitude = setup.xi * setup.g0;
  if (amplitude == 0.0)
    throw DomainError("xi * g0 is zero; Delta is normalized by the GW amplitude");
  DeltaSimulation sim;
  sim.setup = setup;
  const auto psi0 = initial_superposition(setup);
  const auto n1 = density_after_step(setup, threads);
  const int offset = setup.l2 - 1;
  const std::size_t diagonals = static_cast<std::size_t>(setup.l1 + setup.l2 - 1);
  std::vector<double> first(diagonals, 0.0);
  std::vector<bool> seen(diagonals, false);
  sim.n0.resize(n1.size());
  sim.delta.resize(n1.size());
  for (int px = 0; px < setup.l1; ++px)
    for (int py = 0; py < setup.l2; ++py) {
      const std::size_t i = psi0.index(px, py);
      const double n0 = psi0.sites()[i].norm2();
      const double d = (n1[i] - n0) / (amplitude * n0);
      sim.n0[i] = n0;
      sim.delta[i] = d;
      const auto slot = static_cast<std::size_t>(px - py + offset);
      if (!seen[slot]) {
        seen[slot] = true;
        first[slot] = d;
      } else {
        sim.diagonal_spread = std::max(sim.diagonal_spread, std::abs(d - first[slot]));
      }
    }
  // Rounding in N1 - N0 is amplified by 1 / (xi g0); widen for tiny amplitudes.
  const double tol = 1e-10 * std::max(1.0, 1e-4 / std::abs(amplitude));
  if (!(sim.diagonal_spread <= tol)) {
    std::ostringstream os;
    os << "Delta varies along a u diagonal by " << sim.diagonal_spread << " (tolerance " << tol
       << ")";
    throw ConsistencyError(os.str());
  }
  for (std::size_t s = 0; s < diagonals; ++s) {
    sim.profile.u.push_back(static_cast<int>(s) - offset);
    sim.profile.value.push_back(first[s]);
  }
  return sim;
}

DensityProfile delta_simulated(const InterferenceSetup& setup, int threads) {
  return simulate_delta(setup, threads).profile;
}

double delta_formula(double q, double u) {
  const double s = std::sin(q);
  return 2 * kSqrt2 / initial_density(q, u) * std::cos(q * (u - 2) / 2) * s * s;
}

double delta_max(double q) {
  if (!(q >= 0.0 && q <= kPi)) throw DomainError("delta_max: q must lie in [0, pi]");
  if (q == 0.0) return 0.0;
  const auto f = [q](double u) { return std::abs(delta_formula(q, u)); };
  constexpr int kSamples = 4096;
  const double h = 4 * kPi / q / kSamples;
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < kSamples; ++i) {
    const double v = f(i * h);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double u0 = best * h;
  return compass_maximize_1d(f, u0, h / 2, 1e-10, u0 - h, u0 + h).second;
}

double f_closed(double q) {
  const double s2 = std::sin(q) * std::sin(q);
  const double root = std::sqrt(1 - s2 / 2);
  return 2 * kSqrt2 * s2 * root / (2 + kSqrt2 * std::cos(q) * root - s2);
}

double delta_max_closed_form(double q) {
  if (!(q >= 0.0 && q <= kPi)) throw DomainError("delta_max_closed_form: q must lie in [0, pi]");
  return q < kPi / 2 ? f_closed(kPi - q) : f_closed(q);
}

double delta_max_integer(double q) {
  if (!(q >= 0.0 && q <= kPi)) throw DomainError("delta_max_integer: q must lie in [0, pi]");
  if (q == 0.0) return 0.0;
  const double span = std::min(std::ceil(4 * kPi / q), static_cast<double>(1 << 20));
  double best = 0.0;
  for (long u = 0; u <= static_cast<long>(span); ++u)
    best = std::max(best, std::abs(delta_formula(q, static_cast<double>(u))));
  return best;
}

double q_max() {
  constexpr int kSamples = 4096;
  const double lo = kPi / 2;
  const double h = (kPi - lo) / kSamples;
  double best_q = lo;
  double best = -1.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double q = lo + i * h;
    const double v = delta_max_closed_form(q);
    if (v > best) {
      best = v;
      best_q = q;
    }
  }
  return compass_maximize_1d(delta_max_closed_form, best_q, h / 2, 1e-12,
                             std::max(lo, best_q - h), std::min(kPi, best_q + h))
      .first;
}

double wavelength(double q) {
  if (q == 0.0) throw DomainError("wavelength: q must be nonzero");
  return 4 * kPi / std::abs(q);
}

void write_density_grid(const DeltaSimulation& sim, const std::string& path) {
  CsvWriter csv(path, {"pX", "pY", "N0", "delta"});
  const auto l2 = static_cast<std::size_t>(sim.setup.l2);
  for (int px = 0; px < sim.setup.l1; ++px)
    for (int py = 0; py < sim.setup.l2; ++py) {
      const std::size_t i = static_cast<std::size_t>(px) * l2 + static_cast<std::size_t>(py);
      csv.row({static_cast<double>(px), static_cast<double>(py), sim.n0[i], sim.delta[i]});
    }
  csv.close();
}

void write_profiles(std::span<const double> qs, int samples, const std::string& path) {
  if (samples < 2) throw ConfigError("profile samples: need at least 2");
  for (double q : qs)
    if (!(q > 0.0) || !std::isfinite(q)) throw ConfigError("profile q: must be positive");
  CsvWriter csv(path, {"q", "u", "delta"});
  for (double q : qs) {
    const double two_periods = 8 * kPi / q;
    for (int i = 0; i < samples; ++i) {
      const double u = two_periods * i / (samples - 1);
      csv.row({q, u, delta_formula(q, u)});
    }
  }
  csv.close();
}

void write_deltam_sweep(int n, const std::string& path, int threads) {
  if (n < 2) throw ConfigError("resolution: Delta_M sweep needs at least 2 points");
  std::vector<double> cont(static_cast<std::size_t>(n)), integ(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    const double q = kPi * static_cast<double>(i) / n;
    cont[i] = delta_max(q);
    integ[i] = delta_max_integer(q);
  });
  CsvWriter csv(path, {"q", "deltaM_continuous", "deltaM_integer"});
  for (std::size_t i = 0; i < cont.size(); ++i)
    csv.row({kPi * static_cast<double>(i) / n, cont[i], integ[i]});
  csv.close();
}

}  // namespace qwgw::interference
