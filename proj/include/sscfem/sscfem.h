/* C interface to the sscfem solver. All functions are thread safe on distinct handles. */
#ifndef SSCFEM_H
#define SSCFEM_H

#include <stddef.h>

#if defined(SSCFEM_BUILDING_LIBRARY)
#define SSCFEM_API __attribute__((visibility("default")))
#else
#define SSCFEM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssc_status {
    SSC_OK = 0,
    SSC_ERR_INVALID_ARGUMENT = 1, /* null handle, bad buffer, out of domain input */
    SSC_ERR_CONFIG = 2,           /* unreadable or malformed configuration */
    SSC_ERR_MODEL = 3,            /* problem violates a model invariant */
    SSC_ERR_STATE = 4,            /* e.g. querying measures of a non-optimal solve */
    SSC_ERR_SOLVER = 5,
    SSC_ERR_IO = 6,
    SSC_ERR_INTERNAL = 7
} ssc_status;

typedef struct ssc_config ssc_config;
typedef struct ssc_solution ssc_solution;

/* Receives one line of progress output (no trailing newline). */
typedef void (*ssc_log_fn)(const char* line, void* user);

SSCFEM_API const char* ssc_version(void);
/* Message of the last failing call on this thread; "" when none. */
SSCFEM_API const char* ssc_last_error(void);
SSCFEM_API const char* ssc_status_name(ssc_status status);

SSCFEM_API ssc_status ssc_config_create(ssc_config** out);
SSCFEM_API ssc_status ssc_config_load(const char* path, ssc_config** out);
SSCFEM_API ssc_status ssc_config_parse(const char* text, ssc_config** out);
SSCFEM_API ssc_status ssc_config_set(ssc_config* config, const char* key, const char* value);
/* Copies the key = value text into buf (NUL terminated, truncated to cap); *needed gets the
   full length including the terminator. buf may be NULL when cap is 0. */
SSCFEM_API ssc_status ssc_config_serialize(const ssc_config* config, char* buf, size_t cap, size_t* needed);
/* Diagnostics one per line, prefixed "error: " or "warning: "; *errors counts the errors. */
SSCFEM_API ssc_status ssc_config_validate(const ssc_config* config, char* buf, size_t cap, size_t* needed,
                                          int* errors);
SSCFEM_API void ssc_config_destroy(ssc_config* config);

/* Full pipeline run writing the output files. *exit_code: 0 ok, 2 usage/config/io, 3 solver. */
SSCFEM_API ssc_status ssc_run(const ssc_config* config, ssc_log_fn log, void* user, int* exit_code);

/* Solves the first discretization of the config. A non-optimal LP still yields a handle. */
SSCFEM_API ssc_status ssc_solve(const ssc_config* config, ssc_solution** out);
SSCFEM_API void ssc_solution_destroy(ssc_solution* solution);
SSCFEM_API ssc_status ssc_solution_status(const ssc_solution* solution, const char** status);
SSCFEM_API ssc_status ssc_solution_cost(const ssc_solution* solution, double* cost);
SSCFEM_API ssc_status ssc_solution_weights(const ssc_solution* solution, double* w1, double* w2);
SSCFEM_API ssc_status ssc_solution_cells(const ssc_solution* solution, size_t* cells);
/* breakpoints needs cap + 1 entries, gamma cap entries; cap must be >= the cell count. */
SSCFEM_API ssc_status ssc_solution_density(const ssc_solution* solution, double* breakpoints, double* gamma,
                                           size_t cap);
SSCFEM_API ssc_status ssc_solution_average_control(const ssc_solution* solution, double x, double* out);

#ifdef __cplusplus
}
#endif

#endif
