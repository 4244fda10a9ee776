// Copyright 2026 The spinmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the spinmech simulator.
 *
 * Every call returns a spinmech_status. On failure the message is available
 * from spinmech_last_error() on the same thread until the next call there.
 * Objects are opaque and owned by the caller; release them with the matching
 * _free function. Strings returned through char** are released with
 * spinmech_string_free.
 */
#ifndef SPINMECH_H
#define SPINMECH_H

#include <stddef.h>

#if defined(SPINMECH_BUILDING_LIBRARY)
#define SPINMECH_API __attribute__((visibility("default")))
#else
#define SPINMECH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spinmech_status {
    SPINMECH_OK = 0,
    SPINMECH_ERR_INVALID_ARGUMENT = 1,
    SPINMECH_ERR_CONFIG = 2,
    SPINMECH_ERR_INFEASIBLE = 3,
    SPINMECH_ERR_NUMERICAL = 4,
    SPINMECH_ERR_ZERO_PROBABILITY = 5,
    SPINMECH_ERR_TRUNCATION = 6,
    SPINMECH_ERR_PRECONDITION = 7,
    SPINMECH_ERR_IO = 8,
    SPINMECH_ERR_INTERNAL = 9
} spinmech_status;

typedef struct spinmech_config spinmech_config;
typedef struct spinmech_table spinmech_table;
typedef struct spinmech_grid spinmech_grid;

SPINMECH_API const char* spinmech_version(void);
SPINMECH_API const char* spinmech_last_error(void);
SPINMECH_API const char* spinmech_status_name(spinmech_status status);
SPINMECH_API void spinmech_string_free(char* s);

/* Configuration */
SPINMECH_API spinmech_status spinmech_config_load(const char* path, spinmech_config** out);
SPINMECH_API spinmech_status spinmech_config_parse(const char* text, spinmech_config** out);
SPINMECH_API spinmech_status spinmech_config_set(spinmech_config* cfg, const char* key, const char* value);
SPINMECH_API spinmech_status spinmech_config_to_string(const spinmech_config* cfg, char** out);
/* JSON object with derived quantities (mode frequency, occupations, couplings,
 * truncations, tolerances). Fails like the experiments when the config is
 * incomplete. */
SPINMECH_API spinmech_status spinmech_config_summary(const spinmech_config* cfg, char** out_json);
SPINMECH_API void spinmech_config_free(spinmech_config* cfg);

/* Experiments. jobs <= 0 means "all hardware threads". */
SPINMECH_API spinmech_status spinmech_cool_sweep(const spinmech_config* cfg, const double* radii_um, size_t n,
                                                 int jobs, spinmech_table** out);
SPINMECH_API spinmech_status spinmech_cat_sweep(const spinmech_config* cfg, const double* gammas, size_t n, int jobs,
                                                spinmech_table** out);
SPINMECH_API spinmech_status spinmech_cat_wigner(const spinmech_config* cfg, double gamma, spinmech_grid** out);
SPINMECH_API spinmech_status spinmech_squeeze_scan(const spinmech_config* cfg, const double* xis, size_t n_xi,
                                                   const double* omegas, size_t n_omega, int jobs,
                                                   spinmech_table** out);
SPINMECH_API spinmech_status spinmech_squeeze_wigner(const spinmech_config* cfg, double xi, double omega_ratio,
                                                     spinmech_grid** out);

/* Parses "lo:hi:n" or "a,b,c". *out is allocated with malloc-compatible
 * storage owned by the library; release with spinmech_values_free. */
SPINMECH_API spinmech_status spinmech_parse_grid(const char* text, double** out, size_t* n);
SPINMECH_API void spinmech_values_free(double* values);

/* Tables */
SPINMECH_API size_t spinmech_table_rows(const spinmech_table* t);
SPINMECH_API size_t spinmech_table_cols(const spinmech_table* t);
SPINMECH_API const char* spinmech_table_column(const spinmech_table* t, size_t col);
SPINMECH_API double spinmech_table_value(const spinmech_table* t, size_t row, size_t col);
SPINMECH_API spinmech_status spinmech_table_write_csv(const spinmech_table* t, const char* path);
SPINMECH_API void spinmech_table_free(spinmech_table* t);

/* Wigner grids */
SPINMECH_API double spinmech_grid_min(const spinmech_grid* g);
SPINMECH_API double spinmech_grid_integral(const spinmech_grid* g);
SPINMECH_API int spinmech_grid_warning(const spinmech_grid* g);
SPINMECH_API spinmech_status spinmech_grid_write(const spinmech_grid* g, const char* csv_path,
                                                 const char* json_path, const char* label);
SPINMECH_API void spinmech_grid_free(spinmech_grid* g);

/* Invariant suites: "core", "physics" or "all". */
#define SPINMECH_VALIDATE_INJECT_THERMAL_SIGN_ERROR 1
SPINMECH_API spinmech_status spinmech_validate(const char* suite, int flags, char** report, int* n_checks,
                                               int* n_failed);

#ifdef __cplusplus
}
#endif

#endif /* SPINMECH_H */
