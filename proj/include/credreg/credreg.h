// Copyright 2026 The credreg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CREDREG_CREDREG_H
#define CREDREG_CREDREG_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(CREDREG_BUILDING_LIBRARY)
#define CREDREG_API __declspec(dllexport)
#else
#define CREDREG_API __declspec(dllimport)
#endif
#else
#define CREDREG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum credreg_status {
    CREDREG_OK = 0,
    CREDREG_INVALID_ARGUMENT = 1,
    CREDREG_INVALID_DIMENSION = 2,
    CREDREG_DIMENSION_MISMATCH = 3,
    CREDREG_CONTRACT_VIOLATION = 4,
    CREDREG_NOT_INFORMATIONALLY_COMPLETE = 5,
    CREDREG_ILL_CONDITIONED = 6,
    CREDREG_DEGENERATE_DIRECTION = 7,
    CREDREG_SAMPLER_PRECONDITION = 8,
    CREDREG_CHORD_STUCK = 9,
    CREDREG_NO_BOUNDARY_POINTS = 10,
    CREDREG_INCONSISTENT_REGION = 11,
    CREDREG_INVALID_CONFIG = 12,
    CREDREG_IO_ERROR = 13,
    CREDREG_INTERNAL = 14
} credreg_status;

typedef struct credreg_config credreg_config;
typedef struct credreg_report credreg_report;

/* One row of the size/credibility/capacity table. NaN marks a missing value. */
typedef struct credreg_row {
    double lambda;
    double lambda_prime;
    double u;
    double u_stderr;
    double S_rel;
    double C;
    double S_hs;
    double S_hs_stderr;
    double S_tr;
    double S_tr_stderr;
    double S_b;
    double S_b_stderr;
    double S_hs_analytic;
    double S_tr_analytic;
    double S_b_analytic;
    double u_analytic;
} credreg_row;

typedef struct credreg_cap_moments {
    double I0;
    double I1_coefficient;
    double I2_iso;
    double I2_aniso;
} credreg_cap_moments;

/* Message of the most recent failure on the calling thread. */
CREDREG_API const char *credreg_last_error(void);
CREDREG_API const char *credreg_status_string(credreg_status status);
CREDREG_API const char *credreg_version(void);

CREDREG_API credreg_status credreg_config_create(credreg_config **out);
CREDREG_API void credreg_config_destroy(credreg_config *config);
CREDREG_API credreg_status credreg_config_load_file(credreg_config *config, const char *path);
CREDREG_API credreg_status credreg_config_set(credreg_config *config, const char *key, const char *value);
/* Copies the value into buffer (NUL-terminated, truncated to size); *needed excludes the NUL. */
CREDREG_API credreg_status credreg_config_get(const credreg_config *config, const char *key, char *buffer,
                                              size_t size, size_t *needed);
CREDREG_API credreg_status credreg_config_validate(const credreg_config *config);
/* Writes 16 hex digits and a NUL; buffer must hold 17 bytes. */
CREDREG_API credreg_status credreg_config_hash(const credreg_config *config, char *buffer, size_t size);

CREDREG_API credreg_status credreg_run_pipeline(const credreg_config *config, credreg_report **out);
CREDREG_API void credreg_report_destroy(credreg_report *report);
CREDREG_API size_t credreg_report_row_count(const credreg_report *report);
CREDREG_API credreg_status credreg_report_row(const credreg_report *report, size_t index, credreg_row *out);
CREDREG_API credreg_status credreg_report_scalar(const credreg_report *report, const char *name, double *out);
CREDREG_API credreg_status credreg_report_label(const credreg_report *report, const char *name, char *buffer,
                                                size_t size, size_t *needed);
CREDREG_API size_t credreg_report_series_length(const credreg_report *report, const char *name);
CREDREG_API credreg_status credreg_report_series(const credreg_report *report, const char *name, double *values,
                                                 size_t size);
CREDREG_API size_t credreg_report_warning_count(const credreg_report *report);
CREDREG_API size_t credreg_report_error_count(const credreg_report *report);
CREDREG_API credreg_status credreg_report_warning(const credreg_report *report, size_t index, char *buffer,
                                                  size_t size, size_t *needed);
CREDREG_API credreg_status credreg_report_error(const credreg_report *report, size_t index, char *buffer,
                                                size_t size, size_t *needed);
/* Writes credreg_<hash>.csv and .json into directory; the CSV path is copied into path_buffer. */
CREDREG_API credreg_status credreg_report_write(const credreg_report *report, const char *directory,
                                                char *path_buffer, size_t size, size_t *needed);
CREDREG_API credreg_status credreg_report_csv(const credreg_report *report, char *buffer, size_t size,
                                              size_t *needed);
CREDREG_API credreg_status credreg_report_json(const credreg_report *report, char *buffer, size_t size,
                                               size_t *needed);

CREDREG_API credreg_status credreg_incomplete_beta(double x, double a, double b, double *out);
CREDREG_API credreg_status credreg_unit_ball_volume(int d, double *out);
CREDREG_API credreg_status credreg_cap_moments_compute(int d, double l, credreg_cap_moments *out);
CREDREG_API credreg_status credreg_tr_hs_asymptotic(double s_hs, int dimension, double *out);

#ifdef __cplusplus
}
#endif

#endif
