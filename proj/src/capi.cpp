#include "qwgw/qwgw.h"

#include <cstring>
#include <string>

#include "qwgw/continuum.hpp"
#include "qwgw/geometry.hpp"
#include "qwgw/interference.hpp"
#include "qwgw/runner.hpp"
#include "qwgw/spectral.hpp"
#include "qwgw/spin_core.hpp"

struct qwgw_field {
  qwgw::spin::SpinorField field;
};

struct qwgw_walk {
  qwgw::spin::AngleProvider provider;
  qwgw::spin::WalkParams params;
};

struct qwgw_config {
  qwgw::runner::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

qwgw_status status_of(qwgw::ErrorKind kind) {
  switch (kind) {
    case qwgw::ErrorKind::kConfig: return QWGW_ERR_CONFIG;
    case qwgw::ErrorKind::kGeometry: return QWGW_ERR_GEOMETRY;
    case qwgw::ErrorKind::kDomain: return QWGW_ERR_DOMAIN;
    case qwgw::ErrorKind::kConsistency: return QWGW_ERR_CONSISTENCY;
    case qwgw::ErrorKind::kIo: return QWGW_ERR_IO;
  }
  return QWGW_ERR_INTERNAL;
}

template <typename Fn>
qwgw_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QWGW_OK;
  } catch (const qwgw::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QWGW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return QWGW_ERR_INTERNAL;
  }
}

qwgw_status argument_error(const char* what) {
  g_last_error = what;
  return QWGW_ERR_ARGUMENT;
}

qwgw::spin::MassGate gate_of(qwgw_mass_gate g) {
  return g == QWGW_GATE_LITERAL ? qwgw::spin::MassGate::kLiteral
                                : qwgw::spin::MassGate::kContinuum;
}

qwgw::geometry::Waveform waveform_of(const qwgw_waveform& w) {
  using K = qwgw::geometry::Waveform::Kind;
  const K kind = w.kind == QWGW_WAVE_SINE     ? K::kSine
                 : w.kind == QWGW_WAVE_COSINE ? K::kCosine
                                              : K::kConstant;
  return {kind, w.amplitude, w.frequency};
}

void check_site(const qwgw::spin::SpinorField& f, int p1, int p2) {
  if (p1 < 0 || p2 < 0 || p1 >= f.l1() || p2 >= f.l2())
    throw qwgw::ConfigError("site index outside the lattice");
}

}  // namespace

extern "C" {

const char* qwgw_version(void) { return "1.0.0"; }

const char* qwgw_last_error(void) { return g_last_error.c_str(); }

int qwgw_exit_code(qwgw_status status) {
  switch (status) {
    case QWGW_OK: return 0;
    case QWGW_ERR_CONFIG:
    case QWGW_ERR_ARGUMENT: return 2;
    case QWGW_ERR_IO: return 4;
    default: return 3;
  }
}

qwgw_status qwgw_field_create(int l1, int l2, qwgw_field** out) {
  if (!out) return argument_error("out is null");
  *out = nullptr;
  return guard([&] { *out = new qwgw_field{qwgw::spin::SpinorField(l1, l2)}; });
}

void qwgw_field_destroy(qwgw_field* field) { delete field; }

qwgw_status qwgw_field_shape(const qwgw_field* field, int* l1, int* l2) {
  if (!field || !l1 || !l2) return argument_error("null argument");
  *l1 = field->field.l1();
  *l2 = field->field.l2();
  return QWGW_OK;
}

qwgw_status qwgw_field_set(qwgw_field* field, int p1, int p2, const double values[4]) {
  if (!field || !values) return argument_error("null argument");
  return guard([&] {
    check_site(field->field, p1, p2);
    field->field.at(p1, p2) = {{values[0], values[1]}, {values[2], values[3]}};
  });
}

qwgw_status qwgw_field_get(const qwgw_field* field, int p1, int p2, double values[4]) {
  if (!field || !values) return argument_error("null argument");
  return guard([&] {
    check_site(field->field, p1, p2);
    const auto& s = field->field.at(p1, p2);
    values[0] = s.minus.real();
    values[1] = s.minus.imag();
    values[2] = s.plus.real();
    values[3] = s.plus.imag();
  });
}

qwgw_status qwgw_field_norm(const qwgw_field* field, double* out) {
  if (!field || !out) return argument_error("null argument");
  *out = field->field.norm();
  return QWGW_OK;
}

qwgw_status qwgw_walk_create_uniform(const double angles[4], double epsilon, double mass,
                                     qwgw_mass_gate gate, qwgw_walk** out) {
  if (!angles || !out) return argument_error("null argument");
  *out = nullptr;
  return guard([&] {
    const qwgw::AngleSet a{angles[0], angles[1], angles[2], angles[3]};
    if (!a.finite()) throw qwgw::ConfigError("angles must be finite");
    qwgw::spin::WalkParams params{epsilon, mass, 0.0, gate_of(gate)};
    params.validate();
    *out = new qwgw_walk{qwgw::spin::AngleProvider::constant(a), params};
  });
}

qwgw_status qwgw_walk_create_gw(const qwgw_gw_params* gw, double epsilon, double mass,
                                qwgw_mass_gate gate, qwgw_walk** out) {
  if (!gw || !out) return argument_error("null argument");
  *out = nullptr;
  return guard([&] {
    const qwgw::geometry::GwParams p{gw->xi, waveform_of(gw->f), waveform_of(gw->g), gw->k,
                                     gw->k_prime};
    qwgw::spin::WalkParams params{epsilon, mass, gw->xi, gate_of(gate)};
    params.validate();
    auto provider = qwgw::spin::AngleProvider(
        [p, epsilon](long j, int, int) {
          return qwgw::geometry::gw_angles(p, static_cast<double>(j) * epsilon);
        },
        true);
    *out = new qwgw_walk{provider, params};
  });
}

void qwgw_walk_destroy(qwgw_walk* walk) { delete walk; }

qwgw_status qwgw_walk_angles(const qwgw_walk* walk, long j, double angles[4]) {
  if (!walk || !angles) return argument_error("null argument");
  return guard([&] {
    const auto a = walk->provider(j, 0, 0);
    angles[0] = a.t11;
    angles[1] = a.t12;
    angles[2] = a.t21;
    angles[3] = a.t22;
  });
}

qwgw_status qwgw_walk_evolve(const qwgw_walk* walk, qwgw_field* field, long j0, long n,
                             int threads) {
  if (!walk || !field) return argument_error("null argument");
  return guard([&] {
    field->field = qwgw::spin::evolve(field->field, j0, n, walk->provider, walk->params, threads);
  });
}

qwgw_status qwgw_rho(double qx, double qy, double* out) {
  if (!out) return argument_error("out is null");
  return guard([&] { *out = qwgw::spectral::rho({qx, qy}); });
}

qwgw_status qwgw_rho_bar(double qx, double qy, double* out) {
  if (!out) return argument_error("out is null");
  return guard([&] { *out = qwgw::spectral::rho_bar({qx, qy}); });
}

qwgw_status qwgw_find_rho_maxima(int resolution, int threads, double* rows, size_t capacity,
                                 size_t* count) {
  if (!count || (capacity > 0 && !rows)) return argument_error("null argument");
  return guard([&] {
    const auto maxima = qwgw::spectral::find_rho_maxima(resolution, threads);
    *count = maxima.size();
    for (std::size_t i = 0; i < maxima.size() && i < capacity; ++i) {
      rows[4 * i] = maxima[i].q.qx;
      rows[4 * i + 1] = maxima[i].q.qy;
      rows[4 * i + 2] = maxima[i].rho;
      rows[4 * i + 3] = maxima[i].rho_bar;
    }
  });
}

qwgw_status qwgw_unaffected_modes(double tolerance, int resolution, int threads, double* rows,
                                  size_t capacity, size_t* count) {
  if (!count || (capacity > 0 && !rows)) return argument_error("null argument");
  return guard([&] {
    const auto zeros = qwgw::spectral::unaffected_modes(tolerance, resolution, threads);
    *count = zeros.size();
    for (std::size_t i = 0; i < zeros.size() && i < capacity; ++i) {
      rows[2 * i] = zeros[i].qx;
      rows[2 * i + 1] = zeros[i].qy;
    }
  });
}

qwgw_status qwgw_delta_formula(double q, double u, double* out) {
  if (!out) return argument_error("out is null");
  return guard([&] { *out = qwgw::interference::delta_formula(q, u); });
}

qwgw_status qwgw_delta_max(double q, double* out) {
  if (!out) return argument_error("out is null");
  return guard([&] { *out = qwgw::interference::delta_max(q); });
}

qwgw_status qwgw_q_max(double* out) {
  if (!out) return argument_error("out is null");
  return guard([&] { *out = qwgw::interference::q_max(); });
}

qwgw_status qwgw_nearest_admissible_q(double q, int l, double* out) {
  if (!out) return argument_error("out is null");
  if (l <= 0) return argument_error("l must be positive");
  return guard([&] { *out = qwgw::interference::nearest_admissible_q(q, l); });
}

qwgw_status qwgw_residual_scan(qwgw_continuum_case which, const double* epsilons, size_t n,
                               double box_length, qwgw_mass_gate gate, int threads,
                               double* residuals, double* slope) {
  if (!epsilons || !residuals || !slope) return argument_error("null argument");
  if (n < 2) return argument_error("need at least two epsilons");
  return guard([&] {
    using C = qwgw::continuum::ContinuumCase;
    const C c = which == QWGW_CASE_PURE_SHEAR ? C::kPureShear
                : which == QWGW_CASE_MASSIVE  ? C::kMassive
                : which == QWGW_CASE_CURVED   ? C::kCurved
                                              : C::kFlat;
    const auto scan = qwgw::continuum::residual_scan(c, std::span<const double>(epsilons, n),
                                                     box_length, gate_of(gate), threads);
    for (std::size_t i = 0; i < n; ++i) residuals[i] = scan.points[i].residual;
    *slope = scan.slope;
  });
}

qwgw_status qwgw_config_parse(const char* json_text, const char* source_path, qwgw_config** out) {
  if (!json_text || !out) return argument_error("null argument");
  *out = nullptr;
  return guard([&] {
    auto c = qwgw::runner::parse_config(json_text);
    if (source_path) c.config_path = source_path;
    *out = new qwgw_config{std::move(c)};
  });
}

void qwgw_config_destroy(qwgw_config* config) { delete config; }

const char* qwgw_config_experiment(const qwgw_config* config) {
  return config ? config->config.experiment.c_str() : "";
}

const char* qwgw_config_out_dir(const qwgw_config* config) {
  return config ? config->config.out_dir.c_str() : "";
}

qwgw_status qwgw_run(const qwgw_config* config, char* manifest_path, size_t capacity) {
  if (!config) return argument_error("config is null");
  return guard([&] {
    const auto report = qwgw::runner::run(config->config);
    if (manifest_path && capacity > 0) {
      const std::size_t len = std::min(capacity - 1, report.manifest_path.size());
      std::memcpy(manifest_path, report.manifest_path.data(), len);
      manifest_path[len] = '\0';
    }
  });
}

}  // extern "C"
