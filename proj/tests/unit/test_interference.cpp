#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "../support.hpp"
#include "qwgw/fit.hpp"
#include "qwgw/interference.hpp"
#include "qwgw/spectral.hpp"

using namespace qwgw;
using namespace qwgw::interference;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

const double kQm = 1.97504;

}  // namespace

TEST_CASE("admissible wavenumbers") {
  CHECK(nearest_admissible_q(kQm, 64) == doctest::Approx(10 * kPi / 16));
  CHECK(nearest_admissible_q(0.001, 64) == doctest::Approx(4 * kPi / 64));
  InterferenceSetup bad{kQm, 64, 64, 1e-4, 1.0};
  try {
    bad.validate();
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("1.963495") != std::string::npos);
  }
  CHECK_NOTHROW((InterferenceSetup{10 * kPi / 16, 64, 64, 1e-4, 1.0}.validate()));
  CHECK_THROWS_AS((InterferenceSetup{10 * kPi / 16, 63, 64, 1e-4, 1.0}.validate()), ConfigError);
}

TEST_CASE("initial superposition and its density") {
  const double q = 10 * kPi / 16;
  const InterferenceSetup s{q, 64, 64, 1e-4, 1.0};
  const auto f = initial_superposition(s);
  CHECK(f.at(5, 5).norm2() == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-14));
  for (int px = 0; px < 64; px += 3)
    for (int py = 0; py < 64; py += 5)
      CHECK(std::abs(f.at(px, py).norm2() - initial_density(q, px - py)) < 1e-12);
}

TEST_CASE("both polarizations share the eigenvalue exp(-i q)") {
  const double q = 1.3;
  const Spinor2 psi1{Complex{}, Complex{1.0}};
  const Spinor2 psi2{Complex{0, -1 / std::sqrt(2.0)}, Complex{1 / std::sqrt(2.0)}};
  const auto lambda = std::exp(Complex{0, -q});
  const auto r1 = spectral::mode_w0({q, 0}) * psi1 - lambda * psi1;
  const auto r2 = spectral::mode_w0({0, q}) * psi2 - lambda * psi2;
  CHECK(std::sqrt(r1.norm2()) < 1e-14);
  CHECK(std::sqrt(r2.norm2()) < 1e-14);
}

TEST_CASE("free step leaves the density unchanged") {
  const InterferenceSetup s{10 * kPi / 16, 64, 64, 0.0, 1.0};
  const auto n1 = density_after_step(s);
  const auto f = initial_superposition(s);
  double worst = 0;
  for (std::size_t i = 0; i < n1.size(); ++i)
    worst = std::max(worst, std::abs(n1[i] - f.sites()[i].norm2()));
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(simulate_delta(s), DomainError);
}

TEST_CASE("simulated Delta depends only on u and follows the formula") {
  const double q = 10 * kPi / 16;
  const auto sim = simulate_delta({q, 64, 64, 1e-4, 1.0});
  CHECK(sim.diagonal_spread < 1e-10);
  CHECK(sim.profile.u.size() == 127);
  CHECK(sim.profile.u.front() == -63);
  double worst = 0;
  for (std::size_t i = 0; i < sim.profile.u.size(); ++i)
    worst = std::max(worst, std::abs(sim.profile.value[i] - delta_formula(q, sim.profile.u[i])));
  CHECK(worst < 5e-4);
}

TEST_CASE("simulated Delta converges to the formula at first order in xi") {
  const double q = 10 * kPi / 16;
  std::vector<double> xs{1e-2, 1e-3, 1e-4}, err;
  for (double xi : xs) {
    const auto p = delta_simulated({q, 64, 64, xi, 1.0});
    double worst = 0;
    for (std::size_t i = 0; i < p.u.size(); ++i)
      worst = std::max(worst, std::abs(p.value[i] - delta_formula(q, p.u[i])));
    CHECK(worst <= 5 * xi);
    err.push_back(worst);
  }
  CHECK(loglog_slope(xs, err) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("simulated Delta near q_max reaches the peak amplitude") {
  // 70 sites per side admit q = 4 pi 11 / 70, within 3e-4 of q_max.
  const double q = nearest_admissible_q(kQm, 70);
  CHECK(std::abs(q - kQm) < 1e-3);
  const auto p = delta_simulated({q, 70, 70, 1e-4, 1.0});
  double peak = 0;
  for (double v : p.value) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(2.48161).epsilon(1e-2 / 2.48161));
}

TEST_CASE("Delta formula") {
  for (double u : {-3.0, 0.0, 1.5, 7.0}) CHECK(std::abs(delta_formula(kPi, u)) < 1e-30);
  CHECK(delta_formula(kPi / 2, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (double q : {0.4, 1.1, 2.5})
    for (double u : {-1.0, 0.3, 4.0})
      CHECK(delta_formula(q, u + 4 * kPi / q) == doctest::Approx(delta_formula(q, u)).epsilon(1e-12));
}

TEST_CASE("Delta_M values") {
  CHECK(delta_max(kPi / 2) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(delta_max(kQm) == doctest::Approx(2.48161).epsilon(1e-5));
  CHECK(delta_max(kPi - kQm) == doctest::Approx(2.48161).epsilon(1e-5));
  CHECK(delta_max(0.0) == 0.0);
  CHECK(delta_max(1e-4) < 1e-6);
  CHECK(delta_max(kPi) < 1e-6);
  CHECK_THROWS_AS(delta_max(-0.1), DomainError);
  CHECK_THROWS_AS(delta_max(4.0), DomainError);
}

TEST_CASE("dense Delta_M matches the closed form") {
  for (int i = 1; i < 200; ++i) {
    const double q = kPi * i / 200;
    CHECK(std::abs(delta_max(q) - delta_max_closed_form(q)) < 1e-8);
  }
}

TEST_CASE("Delta_M branches follow the dense maximum") {
  // On [0, pi/2) the maximum is f(pi - q), not f(q).
  const double q = 1.0;
  CHECK(delta_max(q) == doctest::Approx(f_closed(kPi - q)).epsilon(1e-9));
  CHECK(std::abs(delta_max(q) - f_closed(q)) > 1.0);
}

TEST_CASE("Delta_M reflection symmetry") {
  for (int i = 1; i < 512; ++i) {
    const double q = kPi * i / 512;
    CHECK(std::abs(delta_max(q) - delta_max(kPi - q)) < 1e-10);
  }
}

TEST_CASE("q_max and wavelengths") {
  const double qm = q_max();
  CHECK(qm == doctest::Approx(kQm).epsilon(1e-5));
  CHECK(delta_max_closed_form(qm) == doctest::Approx(2.48161).epsilon(1e-5));
  CHECK(wavelength(qm) == doctest::Approx(6.3626).epsilon(1e-4));
  CHECK(wavelength(kPi - qm) == doctest::Approx(10.7722).epsilon(1e-4));
}

TEST_CASE("integer-u maximum never exceeds the continuous one") {
  for (int i = 1; i < 100; ++i) {
    const double q = kPi * i / 100;
    CHECK(delta_max_integer(q) <= delta_max(q) + 1e-12);
  }
  CHECK(delta_max_integer(kPi / 2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("figure tables") {
  const auto grid_path = temp_path("qwgw_fig2.csv");
  const auto sim = simulate_delta({kPi / 2, 8, 8, 1e-4, 1.0});
  write_density_grid(sim, grid_path);
  auto lines = read_lines(grid_path);
  CHECK(lines.front() == "pX,pY,N0,delta");
  CHECK(lines.size() == 65);

  const auto prof_path = temp_path("qwgw_fig3.csv");
  const std::vector<double> qs{0.5, kQm};
  write_profiles(qs, 401, prof_path);
  lines = read_lines(prof_path);
  CHECK(lines.front() == "q,u,delta");
  CHECK(lines.size() == 1 + 2 * 401);
  // the last row of each block sits exactly two periods out
  const auto last = lines[401];
  const double u_last = std::stod(last.substr(last.find(',') + 1));
  CHECK(u_last == doctest::Approx(8 * kPi / 0.5).epsilon(1e-15));

  const auto sweep_path = temp_path("qwgw_fig4.csv");
  write_deltam_sweep(64, sweep_path, 2);
  lines = read_lines(sweep_path);
  CHECK(lines.front() == "q,deltaM_continuous,deltaM_integer");
  CHECK(lines.size() == 65);
  CHECK(lines[1] == "0,0,0");

  CHECK_THROWS_AS(write_deltam_sweep(64, "/nonexistent-dir/x.csv"), IoError);
  for (const auto& p : {grid_path, prof_path, sweep_path}) std::filesystem::remove(p);
}
