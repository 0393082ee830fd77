// Command-line front end. Flags override keys of the optional JSON config;
// the merged document is handed to the library through its C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwgw/qwgw.h"

namespace {

constexpr int kConfigExit = 2;

int fail_config(const std::string& msg) {
  std::cerr << "qwgw: " << msg << '\n';
  return kConfigExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum walks in a gravitational-wave background"};
  std::string config_path;
  std::optional<std::string> experiment, out;
  std::optional<int> threads, resolution;
  std::optional<double> xi, q;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--experiment", experiment,
                 "evolve, spectrum, rho-max, unaffected-modes, interference, deltam-sweep, "
                 "continuum-check, gw-angles or figures");
  app.add_option("--out", out, "output directory (default: $QWGW_OUT_DIR, then qwgw-out)");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--resolution", resolution, "grid resolution");
  app.add_option("--xi", xi, "gravitational-wave amplitude");
  app.add_option("--q", q, "common wavenumber of the interfering modes");
  app.set_version_flag("--version", std::string(qwgw_version()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  nlohmann::json doc = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return fail_config("config file '" + config_path + "' cannot be read");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      return fail_config("config '" + config_path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) return fail_config("config must be a JSON object");
  }
  if (experiment) doc["experiment"] = *experiment;
  if (out) doc["out"] = *out;
  if (threads) doc["threads"] = *threads;
  if (resolution) doc["resolution"] = *resolution;
  if (xi) doc["xi"] = *xi;
  if (q) doc["q"] = *q;

  qwgw_config* cfg = nullptr;
  qwgw_status st = qwgw_config_parse(doc.dump().c_str(),
                                     config_path.empty() ? nullptr : config_path.c_str(), &cfg);
  if (st != QWGW_OK) {
    std::cerr << "qwgw: " << qwgw_last_error() << '\n';
    return qwgw_exit_code(st);
  }
  char manifest[4096];
  st = qwgw_run(cfg, manifest, sizeof manifest);
  if (st != QWGW_OK) {
    std::cerr << "qwgw: " << qwgw_config_experiment(cfg) << " failed: " << qwgw_last_error()
              << '\n';
    qwgw_config_destroy(cfg);
    return qwgw_exit_code(st);
  }
  std::cout << manifest << '\n';
  qwgw_config_destroy(cfg);
  return 0;
}
