#include "qwgw/runner.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qwgw/continuum.hpp"
#include "qwgw/csv.hpp"
#include "qwgw/interference.hpp"
#include "qwgw/spectral.hpp"

namespace qwgw::runner {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "evolve",      "spectrum",     "rho-max",         "unaffected-modes", "interference",
      "deltam-sweep", "continuum-check", "gw-angles",     "figures"};
  return names;
}

namespace {

constexpr double kDefaultAmplitude = 1e-4;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError(key + ": " + why);
}

template <typename T>
T read(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(key, "has the wrong type (" + std::string(j.type_name()) + ")");
  }
}

double read_real(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(key, "must be finite");
  return v;
}

int read_int(const json& j, const std::string& key, int lo, int hi) {
  if (!j.is_number_integer()) bad(key, "must be an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::vector<double> read_reals(const json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_real(j[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) bad(prefix + k, "unknown key");
}

geometry::Waveform read_waveform(const json& j, const std::string& key) {
  if (j.is_number()) return geometry::Waveform::constant(read_real(j, key));
  if (!j.is_object()) bad(key, "must be a number or an object {kind, amplitude, frequency}");
  reject_unknown(j, {"kind", "amplitude", "frequency"}, key + ".");
  geometry::Waveform w;
  if (j.contains("kind")) {
    try {
      w.kind = geometry::waveform_kind_from_string(read<std::string>(j["kind"], key + ".kind"));
    } catch (const ConfigError& e) {
      bad(key + ".kind", e.what());
    }
  }
  if (j.contains("amplitude")) w.amplitude = read_real(j["amplitude"], key + ".amplitude");
  if (j.contains("frequency")) w.frequency = read_real(j["frequency"], key + ".frequency");
  return w;
}

json waveform_json(const geometry::Waveform& w) {
  return {{"kind", geometry::to_string(w.kind)},
          {"amplitude", w.amplitude},
          {"frequency", w.frequency}};
}

void validate(RunConfig& c) {
  const auto& names = experiment_names();
  if (c.experiment.empty()) bad("experiment", "is required");
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    bad("experiment", "unknown experiment '" + c.experiment + "'");
  if (c.l1 <= 0 || c.l2 <= 0 || c.l1 % 2 || c.l2 % 2)
    bad("lattice", "sides must be positive even integers");
  if (!(c.epsilon > 0)) bad("epsilon", "must be positive");
  if (!(c.mass >= 0)) bad("mass", "must be nonnegative");
  if (c.steps < 0) bad("steps", "must be nonnegative");
  if (!(c.box > 0)) bad("box", "must be positive");
  if (!(c.tolerance > 0)) bad("tolerance", "must be positive");
  if (c.experiment == "rho-max" && c.resolution < 256) bad("resolution", "rho-max needs >= 256");
  if (c.experiment == "unaffected-modes" && (c.resolution < 16 || c.resolution % 4))
    bad("resolution", "unaffected-modes needs a multiple of 4, >= 16");
  if ((c.experiment == "deltam-sweep" || c.experiment == "figures" ||
       c.experiment == "spectrum") &&
      c.resolution < 2)
    bad("resolution", "must be at least 2");
  for (double e : c.epsilons)
    if (!(e > 0)) bad("epsilons", "entries must be positive");
  if (c.experiment == "continuum-check" && c.epsilons.size() < 2)
    bad("epsilons", "need at least two values for an order fit");
  for (double q : c.profile_q)
    if (!(q > 0)) bad("profile_q", "entries must be positive");
  if (c.q && !(*c.q > 0)) bad("q", "must be positive");
  try {
    spectral::grid_kind_from_string(c.spectrum);
  } catch (const ConfigError& e) {
    bad("spectrum", e.what());
  }
  c.gw.xi = c.xi_or(0.0);
  // Sign conditions of the angle square roots over every simulated time.
  try {
    for (long j = 0; j <= c.steps + 1; ++j) geometry::gw_angles(c.gw, static_cast<double>(j) * c.epsilon);
  } catch (const DomainError& e) {
    bad("gw", e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_null()) j = json::object();
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"experiment", "lattice", "epsilon", "mass", "xi", "gw", "resolution", "out",
                  "threads", "q", "steps", "spectrum", "epsilons", "box", "mass_gate",
                  "tolerance", "profile_q"},
                 "");
  RunConfig c;
  if (j.contains("experiment")) c.experiment = read<std::string>(j["experiment"], "experiment");
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    if (l.is_number_integer()) {
      c.l1 = c.l2 = read_int(l, "lattice", 2, 1 << 14);
    } else if (l.is_array() && l.size() == 2) {
      c.l1 = read_int(l[0], "lattice[0]", 2, 1 << 14);
      c.l2 = read_int(l[1], "lattice[1]", 2, 1 << 14);
    } else {
      bad("lattice", "must be an integer or [L1, L2]");
    }
  }
  if (j.contains("epsilon")) c.epsilon = read_real(j["epsilon"], "epsilon");
  if (j.contains("mass")) c.mass = read_real(j["mass"], "mass");
  if (j.contains("xi")) c.xi = read_real(j["xi"], "xi");
  if (j.contains("gw")) {
    const auto& g = j["gw"];
    if (!g.is_object()) bad("gw", "must be an object");
    reject_unknown(g, {"F", "G", "K", "K_prime"}, "gw.");
    if (g.contains("F")) c.gw.f = read_waveform(g["F"], "gw.F");
    if (g.contains("G")) c.gw.g = read_waveform(g["G"], "gw.G");
    if (g.contains("K")) c.gw.k = read_real(g["K"], "gw.K");
    if (g.contains("K_prime")) c.gw.k_prime = read_real(g["K_prime"], "gw.K_prime");
  } else {
    c.gw.g = geometry::Waveform::constant(1.0);
  }
  if (j.contains("resolution")) c.resolution = read_int(j["resolution"], "resolution", 1, 1 << 16);
  if (j.contains("out")) {
    c.out_dir = read<std::string>(j["out"], "out");
    if (c.out_dir.empty()) bad("out", "must not be empty");
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    c.out_dir = env;
  } else {
    c.out_dir = "qwgw-out";
  }
  if (j.contains("threads")) c.threads = read_int(j["threads"], "threads", 1, 1024);
  if (j.contains("q")) c.q = read_real(j["q"], "q");
  if (j.contains("steps")) c.steps = read_int(j["steps"], "steps", 0, 1 << 24);
  if (j.contains("spectrum")) c.spectrum = read<std::string>(j["spectrum"], "spectrum");
  if (j.contains("epsilons")) c.epsilons = read_reals(j["epsilons"], "epsilons");
  if (j.contains("box")) c.box = read_real(j["box"], "box");
  if (j.contains("mass_gate")) {
    const auto g = read<std::string>(j["mass_gate"], "mass_gate");
    if (g == "continuum") c.mass_gate = spin::MassGate::kContinuum;
    else if (g == "literal") c.mass_gate = spin::MassGate::kLiteral;
    else bad("mass_gate", "must be 'continuum' or 'literal'");
  }
  if (j.contains("tolerance")) c.tolerance = read_real(j["tolerance"], "tolerance");
  if (j.contains("profile_q")) c.profile_q = read_reals(j["profile_q"], "profile_q");
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config file '" + path + "' cannot be read");
  std::ostringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str());
  c.config_path = path;
  return c;
}

namespace {

json config_json(const RunConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["lattice"] = {c.l1, c.l2};
  j["epsilon"] = c.epsilon;
  j["mass"] = c.mass;
  j["xi"] = c.xi ? json(*c.xi) : json(nullptr);
  j["gw"] = {{"F", waveform_json(c.gw.f)},
             {"G", waveform_json(c.gw.g)},
             {"K", c.gw.k},
             {"K_prime", c.gw.k_prime}};
  j["resolution"] = c.resolution;
  j["out"] = c.out_dir;
  j["threads"] = c.threads;
  j["q"] = c.q ? json(*c.q) : json(nullptr);
  j["steps"] = c.steps;
  j["spectrum"] = c.spectrum;
  j["epsilons"] = c.epsilons;
  j["box"] = c.box;
  j["mass_gate"] = c.mass_gate == spin::MassGate::kContinuum ? "continuum" : "literal";
  j["tolerance"] = c.tolerance;
  j["profile_q"] = c.profile_q;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2); }

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kIo: return 4;
    case ErrorKind::kGeometry:
    case ErrorKind::kDomain:
    case ErrorKind::kConsistency: return 3;
  }
  return 3;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 is unavailable");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

// Collects the files of one run so they can be hashed or rolled back.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  std::string path(const std::string& name) {
    names_.push_back(name);
    return (dir_ / name).string();
  }
  const std::vector<std::string>& names() const { return names_; }
  const fs::path& dir() const { return dir_; }

  void remove_all() noexcept {
    std::error_code ec;
    for (const auto& n : names_) fs::remove(dir_ / n, ec);
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

spin::AngleProvider gw_provider(const RunConfig& c) {
  const auto gw = c.gw;
  const double eps = c.epsilon;
  return spin::AngleProvider(
      [gw, eps](long j, int, int) { return geometry::gw_angles(gw, static_cast<double>(j) * eps); },
      true);
}

json run_evolve(const RunConfig& c, Artifacts& art) {
  spin::SpinorField field(c.l1, c.l2);
  const double s1 = c.l1 / 8.0;
  const double s2 = c.l2 / 8.0;
  const Spinor2 spin{Complex{1.0 / std::sqrt(2.0)}, Complex{0.0, 1.0 / std::sqrt(2.0)}};
  for (int p1 = 0; p1 < c.l1; ++p1)
    for (int p2 = 0; p2 < c.l2; ++p2) {
      const double x = (p1 - c.l1 / 2) / s1;
      const double y = (p2 - c.l2 / 2) / s2;
      field.at(p1, p2) = Complex{std::exp(-(x * x + y * y) / 2)} * spin;
    }
  const double n0 = field.norm();
  for (auto& s : field.sites()) s *= Complex{1.0 / n0};

  const auto provider = gw_provider(c);
  const spin::WalkParams params{c.epsilon, c.mass, c.xi_or(0.0), c.mass_gate};
  CsvWriter csv(art.path("evolve.csv"), {"step", "norm", "mean_p1", "mean_p2"});
  auto record = [&](long j) {
    double norm2 = 0, m1 = 0, m2 = 0;
    for (int p1 = 0; p1 < c.l1; ++p1)
      for (int p2 = 0; p2 < c.l2; ++p2) {
        const double d = field.at(p1, p2).norm2();
        norm2 += d;
        m1 += d * p1;
        m2 += d * p2;
      }
    const double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > 1e-9) {
      std::ostringstream os;
      os << "norm drifted to " << norm << " at step " << j;
      throw ConsistencyError(os.str());
    }
    csv.row({static_cast<double>(j), norm, m1 / norm2, m2 / norm2});
    return norm;
  };
  double norm = record(0);
  for (long j = 0; j < c.steps; ++j) {
    field = spin::step(field, j, provider, params, c.threads);
    norm = record(j + 1);
  }
  csv.close();
  CsvWriter dens(art.path("final_density.csv"), {"p1", "p2", "density"});
  for (int p1 = 0; p1 < c.l1; ++p1)
    for (int p2 = 0; p2 < c.l2; ++p2)
      dens.row({static_cast<double>(p1), static_cast<double>(p2), field.at(p1, p2).norm2()});
  dens.close();
  return {{"steps", c.steps}, {"final_norm", norm}};
}

json run_spectrum(const RunConfig& c, Artifacts& art) {
  const auto kind = spectral::grid_kind_from_string(c.spectrum);
  const auto grid =
      spectral::spectrum_grid(kind, c.resolution, c.xi_or(0.0), c.gw.g(0.0), c.threads);
  spectral::write_csv(grid, art.path("spectrum.csv"));
  const auto [lo, hi] = std::minmax_element(grid.values.begin(), grid.values.end());
  return {{"kind", spectral::to_string(kind)}, {"min", *lo}, {"max", *hi}};
}

json run_rho_max(const RunConfig& c, Artifacts& art) {
  const auto maxima = spectral::find_rho_maxima(c.resolution, c.threads);
  CsvWriter csv(art.path("rho_maxima.csv"), {"qX", "qY", "rho", "rho_bar"});
  for (const auto& m : maxima) csv.row({m.q.qx, m.q.qy, m.rho, m.rho_bar});
  csv.close();
  return {{"count", maxima.size()}, {"rho_bar", maxima.empty() ? 0.0 : maxima.front().rho_bar}};
}

json run_unaffected(const RunConfig& c, Artifacts& art) {
  const auto zeros = spectral::unaffected_modes(c.tolerance, c.resolution, c.threads);
  CsvWriter csv(art.path("unaffected_modes.csv"), {"qX", "qY", "rho"});
  for (const auto& z : zeros) csv.row({z.qx, z.qy, spectral::rho(z)});
  csv.close();
  return {{"count", zeros.size()},
          {"distinct_modulo_zone", spectral::distinct_modulo_zone(zeros).size()}};
}

double default_q(const RunConfig& c) {
  return c.q ? *c.q : interference::nearest_admissible_q(interference::q_max(), c.l1);
}

json run_interference(const RunConfig& c, Artifacts& art) {
  interference::InterferenceSetup setup{default_q(c), c.l1, c.l2, c.xi_or(kDefaultAmplitude),
                                        c.gw.g(0.0)};
  const auto sim = interference::simulate_delta(setup, c.threads);
  interference::write_density_grid(sim, art.path("density_grid.csv"));
  CsvWriter csv(art.path("profile.csv"), {"q", "u", "delta"});
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < sim.profile.u.size(); ++i) {
    const double u = sim.profile.u[i];
    const double d = sim.profile.value[i];
    csv.row({setup.q, u, d});
    peak = std::max(peak, std::abs(d));
    worst = std::max(worst, std::abs(d - interference::delta_formula(setup.q, u)));
  }
  csv.close();
  return {{"q", setup.q},
          {"xi", setup.xi},
          {"g0", setup.g0},
          {"max_abs_delta", peak},
          {"max_deviation_from_formula", worst},
          {"diagonal_spread", sim.diagonal_spread}};
}

json run_deltam(const RunConfig& c, Artifacts& art) {
  interference::write_deltam_sweep(c.resolution, art.path("deltam.csv"), c.threads);
  const double qm = interference::q_max();
  return {{"q_max", qm},
          {"deltaM_max", interference::delta_max(qm)},
          {"wavelength_q_max", interference::wavelength(qm)},
          {"wavelength_pi_minus_q_max", interference::wavelength(kPi - qm)}};
}

json run_continuum(const RunConfig& c, Artifacts& art) {
  json slopes = json::object();
  for (auto which : {continuum::ContinuumCase::kFlat, continuum::ContinuumCase::kPureShear,
                     continuum::ContinuumCase::kMassive, continuum::ContinuumCase::kCurved}) {
    const auto scan = continuum::residual_scan(which, c.epsilons, c.box, c.mass_gate, c.threads);
    const auto name = continuum::to_string(which);
    CsvWriter csv(art.path("continuum_" + name + ".csv"), {"epsilon", "residual"});
    for (const auto& p : scan.points) csv.row({p.epsilon, p.residual});
    csv.close();
    slopes[name] = scan.slope;
  }
  return {{"slopes", slopes}};
}

json run_gw_angles(const RunConfig& c, Artifacts& art) {
  CsvWriter csv(art.path("gw_angles.csv"), {"t", "theta11", "theta12", "theta21", "theta22"});
  for (long j = 0; j <= c.steps; ++j) {
    const double t = static_cast<double>(j) * c.epsilon;
    const auto a = geometry::gw_angles(c.gw, t);
    csv.row({t, a.t11, a.t12, a.t21, a.t22});
  }
  csv.close();
  return {{"rows", c.steps + 1}};
}

json run_figures(const RunConfig& c, Artifacts& art) {
  const auto grid =
      spectral::spectrum_grid(spectral::GridKind::kRhoBar, c.resolution, 0.0, 0.0, c.threads);
  spectral::write_csv(grid, art.path("fig1_rho_bar.csv"));

  const double qm = interference::q_max();
  interference::InterferenceSetup setup{default_q(c), c.l1, c.l2, c.xi_or(kDefaultAmplitude),
                                        c.gw.g(0.0)};
  const auto sim = interference::simulate_delta(setup, c.threads);
  interference::write_density_grid(sim, art.path("fig2_density.csv"));

  auto qs = c.profile_q;
  if (qs.empty()) qs = {kPi / 4, kPi / 2, kPi - qm, qm, 3 * kPi / 4};
  interference::write_profiles(qs, 401, art.path("fig3_profiles.csv"));

  interference::write_deltam_sweep(c.resolution, art.path("fig4_deltam.csv"), c.threads);
  return {{"rho_bar_max", *std::max_element(grid.values.begin(), grid.values.end())},
          {"q_max", qm},
          {"deltaM_max", interference::delta_max(qm)},
          {"fig2_q", setup.q}};
}

}  // namespace

RunReport run(const RunConfig& config) {
  RunConfig c = config;
  validate(c);
  const fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + c.out_dir + "'");

  Artifacts art(dir);
  try {
    json summary;
    if (c.experiment == "evolve") summary = run_evolve(c, art);
    else if (c.experiment == "spectrum") summary = run_spectrum(c, art);
    else if (c.experiment == "rho-max") summary = run_rho_max(c, art);
    else if (c.experiment == "unaffected-modes") summary = run_unaffected(c, art);
    else if (c.experiment == "interference") summary = run_interference(c, art);
    else if (c.experiment == "deltam-sweep") summary = run_deltam(c, art);
    else if (c.experiment == "continuum-check") summary = run_continuum(c, art);
    else if (c.experiment == "gw-angles") summary = run_gw_angles(c, art);
    else if (c.experiment == "figures") summary = run_figures(c, art);

    json manifest;
    manifest["experiment"] = c.experiment;
    manifest["config"] = config_json(c);
    manifest["inputs"] = json::array();
    if (!c.config_path.empty())
      manifest["inputs"].push_back(
          {{"path", c.config_path}, {"sha256", sha256_file(c.config_path)}});
    manifest["outputs"] = json::array();
    for (const auto& name : art.names())
      manifest["outputs"].push_back(
          {{"file", name}, {"sha256", sha256_file((dir / name).string())}});
    manifest["summary"] = summary;

    RunReport report;
    report.outputs = art.names();
    report.manifest_path = art.path("manifest.json");
    report.outputs.push_back("manifest.json");
    std::ofstream out(report.manifest_path, std::ios::binary);
    out << manifest.dump(2) << '\n';
    out.close();
    if (!out) throw IoError("cannot write '" + report.manifest_path + "'");
    return report;
  } catch (...) {
    art.remove_all();
    throw;
  }
}

}  // namespace qwgw::runner
