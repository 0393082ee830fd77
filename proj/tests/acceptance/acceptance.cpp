// One line per acceptance criterion; exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../support.hpp"
#include "json.hpp"
#include "qwgw/continuum.hpp"
#include "qwgw/fit.hpp"
#include "qwgw/geometry.hpp"
#include "qwgw/interference.hpp"
#include "qwgw/runner.hpp"
#include "qwgw/spectral.hpp"
#include "qwgw/spin_core.hpp"

using namespace qwgw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kRhoPeak = 4.69826;
const double kQxs[2] = {-4.14088, 2.1423};
const double kQys[2] = {-3.46369, 2.81949};
const double kQm = 1.97504;
const double kDeltaPeak = 2.48161;

double nearest(double v, const double (&refs)[2]) {
  return std::min(std::abs(v - refs[0]), std::abs(v - refs[1]));
}

Outcome rho_maxima() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto maxima = spectral::find_rho_maxima(1024);
  const double elapsed = seconds_since(t0);
  o.require(maxima.size() == 4, fmt::format("{} maxima", maxima.size()));
  double worst_value = 0, worst_loc = 0;
  for (const auto& m : maxima) {
    worst_value = std::max(worst_value, std::abs(m.rho_bar - kRhoPeak));
    worst_loc = std::max({worst_loc, nearest(m.q.qx, kQxs), nearest(m.q.qy, kQys)});
    o.require(std::abs(m.rho * std::sqrt(2.0) - m.rho_bar) < 1e-12, "rho_bar != sqrt2 rho");
  }
  // all four sign combinations must appear
  for (double x : kQxs)
    for (double y : kQys)
      o.require(std::any_of(maxima.begin(), maxima.end(),
                            [&](const auto& m) {
                              return std::abs(m.q.qx - x) < 1e-3 && std::abs(m.q.qy - y) < 1e-3;
                            }),
                fmt::format("no maximum near ({}, {})", x, y));
  o.require(worst_value < 1e-3, fmt::format("value off by {:.3g}", worst_value));
  o.require(worst_loc < 1e-3, fmt::format("location off by {:.3g}", worst_loc));
  o.require(elapsed < 30, fmt::format("took {:.1f} s", elapsed));
  if (o.pass)
    o.detail = fmt::format("rho_bar {:.6f}, max location error {:.1e}, {:.2f} s at 1024^2",
                           maxima.front().rho_bar, worst_loc, elapsed);
  return o;
}

Outcome unaffected() {
  Outcome o;
  const auto zeros = spectral::unaffected_modes(1e-9, 512);
  std::vector<spectral::ModePoint> expected;
  for (int rx = -1; rx <= 1; ++rx)
    for (int ry = -1; ry <= 1; ++ry) expected.push_back({2 * kPi * rx, 2 * kPi * ry});
  for (int sx = 0; sx <= 1; ++sx)
    for (int sy = -1; sy <= 0; ++sy)
      expected.push_back({-kPi / 2 + 2 * kPi * sx, kPi / 2 + 2 * kPi * sy});
  o.require(zeros.size() == 13, fmt::format("{} zeros", zeros.size()));
  for (const auto& e : expected)
    o.require(std::any_of(zeros.begin(), zeros.end(),
                          [&](const auto& z) {
                            return std::abs(z.qx - e.qx) < 1e-6 && std::abs(z.qy - e.qy) < 1e-6;
                          }),
              fmt::format("missing ({:.6f}, {:.6f})", e.qx, e.qy));
  for (const auto& z : zeros) o.require(spectral::rho(z) < 1e-9, "nonzero rho at a reported zero");
  if (o.pass)
    o.detail = fmt::format("13 zeros on the closed box, {} distinct modulo 4pi",
                           spectral::distinct_modulo_zone(zeros).size());
  return o;
}

Outcome deltam_curve() {
  Outcome o;
  using namespace interference;
  const double qm = q_max();
  const double dm = delta_max(qm);
  o.require(std::abs(qm - kQm) < 1e-3, fmt::format("q_max {}", qm));
  o.require(std::abs(dm - kDeltaPeak) < 1e-3, fmt::format("Delta_M(q_max) {}", dm));
  o.require(std::abs(delta_max(kPi / 2) - 2.0) < 1e-9, "Delta_M(pi/2) != 2");
  o.require(std::abs(delta_max(0.0)) < 1e-6, "Delta_M(0) != 0");
  o.require(std::abs(delta_max(std::nextafter(kPi, 0.0))) < 1e-6, "Delta_M(pi-) != 0");
  double asym = 0;
  for (int i = 1; i < 1000; ++i) {
    const double q = kPi * i / 1000;
    asym = std::max(asym, std::abs(delta_max(q) - delta_max(kPi - q)));
  }
  o.require(asym < 1e-10, fmt::format("asymmetry {:.2e}", asym));
  const double w1 = wavelength(qm), w2 = wavelength(kPi - qm);
  o.require(std::abs(w1 - 6.3626) < 1e-2, fmt::format("wavelength {}", w1));
  o.require(std::abs(w2 - 10.7722) < 1e-2, fmt::format("wavelength {}", w2));
  if (o.pass)
    o.detail = fmt::format("q_max {:.6f}, Delta_M {:.6f}, wavelengths {:.4f} and {:.4f}", qm, dm,
                           w1, w2);
  return o;
}

Outcome interference_oracle() {
  Outcome o;
  using namespace interference;
  const double q = nearest_admissible_q(q_max(), 64);
  std::vector<double> xs{1e-2, 1e-3, 1e-4}, err;
  for (double xi : xs) {
    const auto p = delta_simulated({q, 64, 64, xi, 1.0});
    double worst = 0;
    for (std::size_t i = 0; i < p.u.size(); ++i)
      worst = std::max(worst, std::abs(p.value[i] - delta_formula(q, p.u[i])));
    err.push_back(worst);
  }
  const double slope = loglog_slope(xs, err);
  o.require(std::abs(slope - 1.0) <= 0.2, fmt::format("slope {:.3f}", slope));
  if (o.pass)
    o.detail = fmt::format("q {:.6f} on 64x64, errors {:.2e} {:.2e} {:.2e}, slope {:.3f}", q,
                           err[0], err[1], err[2], slope);
  return o;
}

Outcome continuum_limit() {
  Outcome o;
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  const auto t0 = std::chrono::steady_clock::now();
  std::string slopes;
  for (auto which : {continuum::ContinuumCase::kFlat, continuum::ContinuumCase::kPureShear,
                     continuum::ContinuumCase::kMassive}) {
    const auto scan = continuum::residual_scan(which, eps, 1.6, spin::MassGate::kContinuum, 1);
    const auto name = continuum::to_string(which);
    o.require(scan.slope >= 1.8 && scan.slope <= 2.2,
              fmt::format("{} slope {:.3f}", name, scan.slope));
    slopes += fmt::format("{} {:.3f} ", name, scan.slope);
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60, fmt::format("took {:.1f} s", elapsed));
  if (o.pass) o.detail = fmt::format("slopes {}up to 128^2 in {:.1f} s", slopes, elapsed);
  return o;
}

Outcome identities() {
  Outcome o;
  const spin::WalkParams params{0.3, 0.0, 0.0, spin::MassGate::kContinuum};
  double worst_t = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = testing::random_provider(seed, false);
    const long j = static_cast<long>(seed % 7);
    worst_t = std::max(worst_t, std::abs(spin::t_epsilon(p, j, 2, 3, params) -
                                         spin::t_epsilon_compact(p, j, 2, 3, params)));
  }
  o.require(worst_t < 1e-12, fmt::format("T_eps forms differ by {:.2e}", worst_t));

  double worst_t0 = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double w1 = testing::uniform(0.2, 2), w2 = testing::uniform(0.2, 2);
    const double ph = testing::uniform(0, 6);
    const continuum::DualTriadSeries s = [=](double t) {
      return geometry::dual_triad(geometry::triad_from_angles(
          {0.3 + 0.2 * std::sin(w1 * t + ph), 1.2 - 0.1 * std::cos(w2 * t),
           1.0 + 0.2 * std::sin(w2 * t + ph), 0.4 + 0.1 * std::cos(w1 * t)}));
    };
    const double t = testing::uniform(-2, 2);
    worst_t0 = std::max(worst_t0,
                        std::abs(continuum::t0(s, t, 1e-4) - continuum::t0_decomposed(s, t, 1e-4)));
  }
  o.require(worst_t0 < 1e-10, fmt::format("T0 forms differ by {:.2e}", worst_t0));

  const auto g = continuum::gamma_rep();
  o.require(continuum::clifford_defect(g) == 0.0, "Clifford relations inexact");
  const Mat2 two = Complex{2.0} * Mat2::identity();
  for (auto [b, c, d] : {std::array{0, 1, 2}, std::array{2, 0, 1}, std::array{1, 2, 0}})
    o.require(max_abs_diff(continuum::j_tensor(g, b, c, d), two) == 0.0,
              fmt::format("J_{}{}{} != 2", b, c, d));
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d) {
        const Mat2 j = continuum::j_tensor(g, b, c, d);
        o.require(max_abs(j + continuum::j_tensor(g, b, d, c)) == 0.0,
                  fmt::format("J not antisymmetric in (c,d) at {}{}{}", b, c, d));
        o.require(max_abs(j + continuum::j_tensor(g, c, b, d)) == 0.0,
                  fmt::format("J not antisymmetric in (b,c) at {}{}{}", b, c, d));
      }
  if (o.pass)
    o.detail = fmt::format("T_eps max diff {:.1e}, T0 max diff {:.1e}, gamma and J exact", worst_t,
                           worst_t0);
  return o;
}

Outcome unitarity() {
  Outcome o;
  double worst_norm = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto provider = testing::random_provider(seed + 1000, seed % 2 == 0);
    const spin::WalkParams params{testing::uniform(0.1, 1.0), testing::uniform(0.0, 2.0), 0.0,
                                  spin::MassGate::kContinuum};
    const auto f = testing::random_field(16, 12);
    const auto g = spin::step(f, static_cast<long>(seed), provider, params);
    worst_norm = std::max(worst_norm, std::abs(g.norm() - f.norm()) / f.norm());
  }
  o.require(worst_norm < 1e-12, fmt::format("norm drift {:.2e}", worst_norm));
  double worst_u = 0;
  for (int i = 0; i < 256; ++i)
    for (int k = 0; k < 256; ++k) {
      const spectral::ModePoint q{-2 * kPi + 4 * kPi * i / 256, -2 * kPi + 4 * kPi * k / 256};
      const Mat2 w0 = spectral::mode_w0(q), w1 = spectral::mode_w1(q);
      worst_u = std::max(worst_u, max_abs(w0.adjoint() * w1 + w1.adjoint() * w0));
    }
  o.require(worst_u < 1e-12, fmt::format("W0'W1 + W1'W0 = {:.2e}", worst_u));
  if (o.pass)
    o.detail = fmt::format("norm drift {:.1e} over 50 configurations, first-order defect {:.1e}",
                           worst_norm, worst_u);
  return o;
}

Outcome mode_operator() {
  Outcome o;
  const int l = 64;
  double worst_ratio = 0;
  std::vector<double> xs{1e-2, 1e-3}, agg(2, 0.0);
  for (int t = 0; t < 100; ++t) {
    const int n1 = static_cast<int>(testing::uniform(-32, 32));
    const int n2 = static_cast<int>(testing::uniform(-32, 32));
    const spectral::ModePoint q{testing::q_of(n1, l), testing::q_of(n2, l)};
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double xg = xs[k];
      const double a = kPi / 2 - xg;
      const auto m = testing::lattice_transfer(
          l, n1, n2, spin::AngleProvider::constant({0, a, a, 0}), spin::WalkParams{});
      const double r =
          max_abs_diff(m, spectral::ModeOperator::at(q, xg, 1.0).first_order());
      agg[k] = std::max(agg[k], r);
      worst_ratio = std::max(worst_ratio, r / (xg * xg));
    }
  }
  const double slope = loglog_slope(xs, agg);
  o.require(worst_ratio < 10, fmt::format("residual / xi^2 reaches {:.2f}", worst_ratio));
  o.require(std::abs(slope - 2.0) <= 0.2, fmt::format("slope {:.3f}", slope));
  if (o.pass)
    o.detail = fmt::format("100 q on 64x64, max residual/xi^2 {:.3f}, slope {:.3f}", worst_ratio,
                           slope);
  return o;
}

double eigen_residual(double xg, spectral::ModePoint q) {
  const auto p = spectral::perturbative_eigs(xg, 1.0, q);
  const Spinor2 v = p.v0_plus + Complex{xg} * p.v1_plus;
  const auto r = spectral::large_scale_operator(xg, 1.0, q) * v - p.lambda_plus * v;
  return std::sqrt(r.norm2());
}

// Distance from each perturbative quantity to the exact eigen-structure.
std::pair<double, double> eig_errors(double xg, spectral::ModePoint q) {
  const auto p = spectral::perturbative_eigs(xg, 1.0, q);
  const auto e = spectral::eigen(spectral::large_scale_operator(xg, 1.0, q));
  double lam = 0, en = 0;
  for (auto [l, ep] : {std::pair{p.lambda_plus, p.energy_plus}, std::pair{p.lambda_minus, p.energy_minus}}) {
    double bl = 1e300, be = 1e300;
    for (const auto& pair : e.pairs) {
      bl = std::min(bl, std::abs(pair.eigenvalue - l));
      // the large-scale operator is not unitary; compare the phase
      be = std::min(be, std::abs(-std::arg(pair.eigenvalue) - std::atan(ep)));
    }
    lam = std::max(lam, bl);
    en = std::max(en, be);
  }
  return {lam, en};
}

Outcome large_scale() {
  Outcome o;
  const spectral::ModePoint q{0.06, 0.08};
  const std::vector<double> xs{1e-2, 1e-3, 1e-4};
  std::vector<double> lam, en, vec;
  for (double x : xs) {
    const auto [l, e] = eig_errors(x, q);
    lam.push_back(l);
    en.push_back(e);
    vec.push_back(eigen_residual(x, q));
  }
  const double s_lam = loglog_slope(xs, lam), s_en = loglog_slope(xs, en);
  const double s_vx = loglog_slope(xs, vec);
  std::vector<double> sizes{0.1, 0.05, 0.025}, vq, op;
  for (double s : sizes) {
    const spectral::ModePoint qs{0.6 * s, 0.8 * s};
    vq.push_back(eigen_residual(1e-3, qs));
    op.push_back(max_abs_diff(spectral::large_scale_operator(0.01, 1.0, qs),
                              spectral::ModeOperator::at(qs, 0.01, 1.0).first_order()));
  }
  const double s_vq = loglog_slope(sizes, vq), s_op = loglog_slope(sizes, op);
  o.require(std::abs(s_lam - 2) <= 0.2, fmt::format("lambda slope {:.3f}", s_lam));
  o.require(std::abs(s_en - 2) <= 0.2, fmt::format("energy slope {:.3f}", s_en));
  o.require(std::abs(s_vx - 2) <= 0.2, fmt::format("eigenvector xi slope {:.3f}", s_vx));
  o.require(std::abs(s_vq - 1) <= 0.2, fmt::format("eigenvector |q| slope {:.3f}", s_vq));
  o.require(s_op >= 1.9, fmt::format("operator |q| slope {:.3f}", s_op));
  // the residual bound C (xi^2 + |q|^2 xi) with a single C over all samples
  double c = 0;
  for (double x : xs)
    for (double s : sizes) {
      const spectral::ModePoint qs{0.6 * s, 0.8 * s};
      c = std::max(c, eigen_residual(x, qs) / (x * x + s * s * x));
    }
  o.require(c < 1.0, fmt::format("bound constant {:.3f}", c));
  if (o.pass)
    o.detail = fmt::format(
        "slopes lambda {:.2f}, E {:.2f}, V(xi) {:.2f}, V(|q|) {:.2f}, operator {:.2f}; C {:.3f}",
        s_lam, s_en, s_vx, s_vq, s_op, c);
  return o;
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> argmax_row(const std::vector<std::vector<double>>& rows, std::size_t col) {
  return *std::max_element(rows.begin(), rows.end(),
                           [col](const auto& a, const auto& b) { return a[col] < b[col]; });
}

nlohmann::json manifest_outputs(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  return nlohmann::json::parse(in)["outputs"];
}

Outcome figures() {
  Outcome o;
  const auto base = fs::temp_directory_path() / "qwgw_acceptance_figures";
  fs::remove_all(base);
  const int resolution = 512;
  std::vector<fs::path> dirs;
  for (int threads : {1, 1, 4}) {
    const auto dir = base / std::to_string(dirs.size());
    dirs.push_back(dir);
    auto c = runner::parse_config(
        fmt::format(R"({{"experiment": "figures", "resolution": {}, "threads": {}, "out": "{}"}})",
                    resolution, threads, dir.string()));
    runner::run(c);
  }
  const auto ref = manifest_outputs(dirs[0]);
  o.require(ref.size() == 4, "expected four figure tables");
  for (std::size_t k = 1; k < dirs.size(); ++k)
    o.require(manifest_outputs(dirs[k]) == ref,
              fmt::format("hashes differ in run {}", k));
  for (const auto& entry : ref)
    o.require(entry["sha256"] == runner::sha256_file((dirs[0] / entry["file"].get<std::string>()).string()),
              "manifest hash does not match file");

  // grid extrema: value within the criterion tolerance, location within half a cell
  const auto fig1 = read_csv(dirs[0] / "fig1_rho_bar.csv");
  const double cell1 = 4 * kPi / resolution;
  double fig1_loc = 0;
  const double fig1_max = argmax_row(fig1, 2)[2];
  for (const auto& row : fig1)
    if (row[2] > fig1_max - 1e-12)
      fig1_loc = std::max({fig1_loc, nearest(row[0], kQxs), nearest(row[1], kQys)});
  o.require(std::abs(fig1_max - kRhoPeak) < 1e-3, fmt::format("figure 1 peak {}", fig1_max));
  o.require(fig1_loc <= cell1 / 2, fmt::format("figure 1 peak location off by {:.3g}", fig1_loc));

  const auto fig4 = read_csv(dirs[0] / "fig4_deltam.csv");
  const auto top = argmax_row(fig4, 1);
  const double cell4 = kPi / resolution;
  const double reflected = std::min(std::abs(top[0] - kQm), std::abs(top[0] - (kPi - kQm)));
  o.require(std::abs(top[1] - kDeltaPeak) < 1e-3, fmt::format("figure 4 peak {}", top[1]));
  o.require(reflected <= cell4 / 2, fmt::format("figure 4 peak at {}", top[0]));
  for (const auto& row : fig4) {
    if (std::abs(row[0] - kPi / 2) < 1e-12)
      o.require(std::abs(row[1] - 2.0) < 1e-9, "figure 4 not 2 at pi/2");
  }
  o.require(std::abs(fig4.front()[1]) < 1e-6, "figure 4 nonzero at q = 0");

  const auto fig3 = read_csv(dirs[0] / "fig3_profiles.csv");
  double fig3_peak = 0;
  for (const auto& row : fig3)
    if (std::abs(row[0] - kQm) < 1e-3) fig3_peak = std::max(fig3_peak, std::abs(row[2]));
  o.require(std::abs(fig3_peak - kDeltaPeak) < 1e-2, fmt::format("figure 3 peak {}", fig3_peak));
  o.require(!read_csv(dirs[0] / "fig2_density.csv").empty(), "figure 2 empty");

  if (o.pass)
    o.detail = fmt::format(
        "hashes stable over 3 runs; fig1 peak {:.5f}, fig4 peak {:.5f} at q {:.5f}", fig1_max,
        top[1], top[0]);
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"rho maxima", rho_maxima},
      {"unaffected modes", unaffected},
      {"Delta_M curve", deltam_curve},
      {"interference oracle", interference_oracle},
      {"continuum limit", continuum_limit},
      {"frame identities", identities},
      {"unitarity", unitarity},
      {"mode-operator oracle", mode_operator},
      {"large-scale perturbation", large_scale},
      {"figure regeneration", figures},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %-26s %s  %s\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
