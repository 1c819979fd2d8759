/* C interface to the semi-relativistic Schroedinger-Poisson ensemble
 * simulator. All objects are opaque handles owned by the caller and released
 * with the matching *_free function. Every fallible call returns an
 * srsp_status; the message of the most recent failure on the calling thread
 * is available from srsp_last_error(). */
#ifndef SRSP_SRSP_H
#define SRSP_SRSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(SRSP_BUILDING_LIBRARY)
#define SRSP_API __attribute__((visibility("default")))
#else
#define SRSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srsp_status {
  SRSP_OK = 0,
  SRSP_E_INVALID_ARGUMENT = 1,
  SRSP_E_DIMENSION = 2,
  SRSP_E_RANGE = 3,
  SRSP_E_PARSE = 4,
  SRSP_E_CONSTRAINT = 5,
  SRSP_E_IO = 6,
  SRSP_E_FORMAT = 7,
  SRSP_E_BLOWUP = 8,
  SRSP_E_VERIFICATION = 9,
  SRSP_E_INTERNAL = 10
} srsp_status;

typedef enum srsp_scheme { SRSP_SCHEME_STRANG = 0, SRSP_SCHEME_LIE = 1, SRSP_SCHEME_DUHAMEL_MIDPOINT = 2 } srsp_scheme;

typedef struct srsp_config srsp_config;
typedef struct srsp_ensemble srsp_ensemble;

typedef struct srsp_diagnostics {
  double t;
  double mass;
  double energy_Tm;
  double energy_half_p;
  double potential_energy;
  double h12;
  double h1;
  double gram_defect;
  double density_min;
} srsp_diagnostics;

/* Receives one line of progress output (no trailing newline). */
typedef void (*srsp_line_fn)(const char* line, void* user);

SRSP_API const char* srsp_version(void);
/* Stable identifier such as "SRSP_E_PARSE"; never NULL. */
SRSP_API const char* srsp_status_name(srsp_status status);
/* Message of the last failure on this thread; empty string when none. */
SRSP_API const char* srsp_last_error(void);

/* Configuration ---------------------------------------------------------- */

SRSP_API srsp_status srsp_config_load(const char* path, srsp_config** out);
SRSP_API srsp_status srsp_config_parse(const char* text, srsp_config** out);
/* Adds a "section.key" = value override and re-validates. */
SRSP_API srsp_status srsp_config_set(srsp_config* cfg, const char* key, const char* value);
SRSP_API void srsp_config_free(srsp_config* cfg);

/* Subcommands: progress goes to `log` (may be NULL). */
SRSP_API srsp_status srsp_command_run(const srsp_config* cfg, srsp_line_fn log, void* user);
SRSP_API srsp_status srsp_command_verify(const srsp_config* cfg, srsp_line_fn log, void* user);
SRSP_API srsp_status srsp_command_converge(const srsp_config* cfg, srsp_line_fn log, void* user);

/* Ensembles -------------------------------------------------------------- */

/* Initial data described by the config (snapshot or seeded random data). */
SRSP_API srsp_status srsp_ensemble_create(const srsp_config* cfg, srsp_ensemble** out);
/* Reads a snapshot onto the configured domain. */
SRSP_API srsp_status srsp_ensemble_read_snapshot(const srsp_config* cfg, const char* path, srsp_ensemble** out);
SRSP_API srsp_status srsp_ensemble_write_snapshot(const srsp_ensemble* e, const char* path);
SRSP_API void srsp_ensemble_free(srsp_ensemble* e);

SRSP_API size_t srsp_ensemble_count(const srsp_ensemble* e);
SRSP_API size_t srsp_ensemble_mode_count(const srsp_ensemble* e);
/* Copies psi_k as interleaved (re, im) pairs; `len` counts doubles (2 P). */
SRSP_API srsp_status srsp_ensemble_coefficients(const srsp_ensemble* e, size_t k, double* out, size_t len);
SRSP_API srsp_status srsp_ensemble_set_coefficients(srsp_ensemble* e, size_t k, const double* in, size_t len);

/* Advances `steps` steps of size dt in place; coupling is 0 (off) or 1 (on). */
SRSP_API srsp_status srsp_ensemble_step(srsp_ensemble* e, srsp_scheme scheme, double dt, int coupling, size_t steps);
SRSP_API srsp_status srsp_ensemble_diagnostics(const srsp_ensemble* e, double t, int coupling, srsp_diagnostics* out);

#ifdef __cplusplus
}
#endif

#endif /* SRSP_SRSP_H */
