/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface of the duoplanck simulation library. Every object is an opaque
 * handle released by its matching *_free function. Functions return a
 * dp_status; on failure dp_last_error() describes the problem (per thread).
 */
#ifndef DUOPLANCK_H
#define DUOPLANCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DP_API __declspec(dllexport)
#else
#define DP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dp_status {
  DP_OK = 0,
  DP_ERR_CONFIG = 1,
  DP_ERR_RUNTIME = 2,
  DP_ERR_USAGE = 3
} dp_status;

typedef struct dp_config dp_config;
typedef struct dp_result dp_result;

DP_API const char* dp_version(void);
DP_API const char* dp_last_error(void);

/* Parses and validates a JSON configuration. */
DP_API dp_status dp_config_parse(const char* text, dp_config** out);
DP_API dp_status dp_config_load(const char* path, dp_config** out);
DP_API void dp_config_free(dp_config* cfg);
DP_API dp_status dp_config_set_seed(dp_config* cfg, uint64_t seed);
/* Name of the configured mode; owned by the handle. */
DP_API const char* dp_config_mode(const dp_config* cfg);
/* Pretty-printed JSON; release with dp_string_free. */
DP_API dp_status dp_config_serialize(const dp_config* cfg, char** out);
DP_API void dp_string_free(char* s);

/* Runs the configuration, writing its files into out_dir. */
DP_API dp_status dp_run(const dp_config* cfg, const char* out_dir, dp_result** out);
DP_API void dp_result_free(dp_result* r);
DP_API const char* dp_result_mode(const dp_result* r);
DP_API int64_t dp_result_steps(const dp_result* r);
DP_API double dp_result_final_trace(const dp_result* r);
DP_API double dp_result_final_min_eig(const dp_result* r);
DP_API double dp_result_wall_time(const dp_result* r);
/* One-line summary; owned by the handle. */
DP_API const char* dp_result_summary(const dp_result* r);

/* Max relative error of the Fourier-space kernel identity over k[0..n). */
DP_API dp_status dp_check_kernel(double G, double hbar, const double* k, size_t n,
                                 double* max_rel_error);

#ifdef __cplusplus
}
#endif

#endif /* DUOPLANCK_H */
