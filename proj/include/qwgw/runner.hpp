#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwgw/geometry.hpp"
#include "qwgw/spin_core.hpp"
#include "qwgw/types.hpp"

// Experiment dispatch and artifact emission.
namespace qwgw::runner {

inline constexpr const char* kOutDirEnv = "QWGW_OUT_DIR";

/// Experiments known to run().
const std::vector<std::string>& experiment_names();

struct RunConfig {
  std::string experiment;
  int l1 = 64;
  int l2 = 64;
  double epsilon = 1.0;
  double mass = 0.0;
  std::optional<double> xi;  ///< interference and figures fall back to 1e-4, others to 0
  geometry::GwParams gw{};   ///< gw.xi mirrors xi
  int resolution = 512;
  std::string out_dir;
  int threads = 1;
  std::optional<double> q;
  long steps = 1;
  std::string spectrum = "rho";
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  double box = 1.6;
  spin::MassGate mass_gate = spin::MassGate::kContinuum;
  double tolerance = 1e-9;
  std::vector<double> profile_q;  ///< empty: a default set around the maxima
  std::string config_path;        ///< recorded in the manifest when set

  double xi_or(double fallback) const { return xi.value_or(fallback); }
};

/// Parses and validates JSON text. Any bad key or value raises ConfigError
/// naming the key. A missing "out" falls back to
/// $QWGW_OUT_DIR, then to "qwgw-out".
RunConfig parse_config(std::string_view json_text);
/// Reads the file, then parse_config. A missing file is a ConfigError.
RunConfig parse_config_file(const std::string& path);

/// Canonical JSON rendering of a config (the form stored in the manifest).
std::string config_to_json(const RunConfig& config);

struct RunReport {
  std::vector<std::string> outputs;  ///< file names inside out_dir, manifest last
  std::string manifest_path;
};

/// Runs the experiment and writes its CSVs plus manifest.json into out_dir.
/// On failure every file written by this run is removed and the error is
/// rethrown.
RunReport run(const RunConfig& config);

/// 0 ok, 2 configuration, 3 numeric or consistency failure, 4 I/O.
int exit_code(ErrorKind kind);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace qwgw::runner
