/* C interface to the qwgw library. Every call returns a qwgw_status; on
 * failure qwgw_last_error() describes the cause for the calling thread. */
#ifndef QWGW_QWGW_H
#define QWGW_QWGW_H

#include <stddef.h>

#if defined(_WIN32)
#define QWGW_API __declspec(dllexport)
#else
#define QWGW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwgw_status {
  QWGW_OK = 0,
  QWGW_ERR_CONFIG = 1,
  QWGW_ERR_GEOMETRY = 2,
  QWGW_ERR_DOMAIN = 3,
  QWGW_ERR_CONSISTENCY = 4,
  QWGW_ERR_IO = 5,
  QWGW_ERR_ARGUMENT = 6,
  QWGW_ERR_INTERNAL = 7
} qwgw_status;

typedef enum qwgw_mass_gate { QWGW_GATE_CONTINUUM = 0, QWGW_GATE_LITERAL = 1 } qwgw_mass_gate;

typedef enum qwgw_waveform_kind {
  QWGW_WAVE_CONSTANT = 0,
  QWGW_WAVE_SINE = 1,
  QWGW_WAVE_COSINE = 2
} qwgw_waveform_kind;

typedef enum qwgw_continuum_case {
  QWGW_CASE_FLAT = 0,
  QWGW_CASE_PURE_SHEAR = 1,
  QWGW_CASE_MASSIVE = 2,
  QWGW_CASE_CURVED = 3
} qwgw_continuum_case;

typedef struct qwgw_waveform {
  qwgw_waveform_kind kind;
  double amplitude;
  double frequency;
} qwgw_waveform;

typedef struct qwgw_gw_params {
  double xi;
  qwgw_waveform f;
  qwgw_waveform g;
  double k;
  double k_prime;
} qwgw_gw_params;

typedef struct qwgw_field qwgw_field;
typedef struct qwgw_walk qwgw_walk;
typedef struct qwgw_config qwgw_config;

QWGW_API const char* qwgw_version(void);
/* Message of the last failed call on this thread; "" if none. */
QWGW_API const char* qwgw_last_error(void);
/* Process exit code for a status: 0 ok, 2 config, 3 numeric, 4 I/O. */
QWGW_API int qwgw_exit_code(qwgw_status status);

/* Spinor fields on an l1 x l2 periodic lattice, both sides even. */
QWGW_API qwgw_status qwgw_field_create(int l1, int l2, qwgw_field** out);
QWGW_API void qwgw_field_destroy(qwgw_field* field);
QWGW_API qwgw_status qwgw_field_shape(const qwgw_field* field, int* l1, int* l2);
/* values = {re psi-, im psi-, re psi+, im psi+} */
QWGW_API qwgw_status qwgw_field_set(qwgw_field* field, int p1, int p2, const double values[4]);
QWGW_API qwgw_status qwgw_field_get(const qwgw_field* field, int p1, int p2, double values[4]);
QWGW_API qwgw_status qwgw_field_norm(const qwgw_field* field, double* out);

/* Walks: spatially uniform angles, or angles driven by a gravitational wave. */
QWGW_API qwgw_status qwgw_walk_create_uniform(const double angles[4], double epsilon, double mass,
                                              qwgw_mass_gate gate, qwgw_walk** out);
QWGW_API qwgw_status qwgw_walk_create_gw(const qwgw_gw_params* gw, double epsilon, double mass,
                                         qwgw_mass_gate gate, qwgw_walk** out);
QWGW_API void qwgw_walk_destroy(qwgw_walk* walk);
/* Angles {t11, t12, t21, t22} at time step j. */
QWGW_API qwgw_status qwgw_walk_angles(const qwgw_walk* walk, long j, double angles[4]);
/* Applies n steps starting at time j0, in place. */
QWGW_API qwgw_status qwgw_walk_evolve(const qwgw_walk* walk, qwgw_field* field, long j0, long n,
                                      int threads);

QWGW_API qwgw_status qwgw_rho(double qx, double qy, double* out);
QWGW_API qwgw_status qwgw_rho_bar(double qx, double qy, double* out);
/* Rows of {qx, qy, rho, rho_bar}; `capacity` counts rows. */
QWGW_API qwgw_status qwgw_find_rho_maxima(int resolution, int threads, double* rows,
                                          size_t capacity, size_t* count);
/* Rows of {qx, qy}. */
QWGW_API qwgw_status qwgw_unaffected_modes(double tolerance, int resolution, int threads,
                                           double* rows, size_t capacity, size_t* count);

QWGW_API qwgw_status qwgw_delta_formula(double q, double u, double* out);
QWGW_API qwgw_status qwgw_delta_max(double q, double* out);
QWGW_API qwgw_status qwgw_q_max(double* out);
QWGW_API qwgw_status qwgw_nearest_admissible_q(double q, int l, double* out);

/* Residual of the first-order continuum expansion at each epsilon. */
QWGW_API qwgw_status qwgw_residual_scan(qwgw_continuum_case which, const double* epsilons,
                                        size_t n, double box_length, qwgw_mass_gate gate,
                                        int threads, double* residuals, double* slope);

/* Run configurations. `source_path` may be NULL; it is recorded in the
 * manifest when given. */
QWGW_API qwgw_status qwgw_config_parse(const char* json_text, const char* source_path,
                                       qwgw_config** out);
QWGW_API void qwgw_config_destroy(qwgw_config* config);
QWGW_API const char* qwgw_config_experiment(const qwgw_config* config);
QWGW_API const char* qwgw_config_out_dir(const qwgw_config* config);
/* Copies the manifest path of the finished run into buf (NUL terminated). */
QWGW_API qwgw_status qwgw_run(const qwgw_config* config, char* manifest_path, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif
