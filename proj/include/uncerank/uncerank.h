// Copyright (c) 2026 The uncerank Authors. All Rights Reserved.
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
//------------------------------------------------------------------------------

/* C interface to the uncerank library: experiment commands driven by a
 * config handle, plus the scalar building blocks (Beta head algebra,
 * thresholds, ranking scores, risk-coverage metrics).
 *
 * Every function returns an uncerank_status. On failure a message is
 * available from uncerank_last_error() on the calling thread until the
 * next call into the library from that thread. */

#ifndef UNCERANK_UNCERANK_H_
#define UNCERANK_UNCERANK_H_

#include <stddef.h>

#if defined(UNCERANK_BUILDING_LIBRARY)
#define UNCERANK_API __attribute__((visibility("default")))
#else
#define UNCERANK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uncerank_status {
  UNCERANK_OK = 0,
  UNCERANK_ERR_CONFIG = 1,
  UNCERANK_ERR_DATA = 2,
  UNCERANK_ERR_PROTOCOL = 3,
  UNCERANK_ERR_IO = 4,
  UNCERANK_ERR_SHAPE = 5,
  UNCERANK_ERR_LOOKUP = 6,
  UNCERANK_ERR_CALIBRATION = 7,
  UNCERANK_ERR_UNDEFINED = 8, /* correlation of a constant vector */
  UNCERANK_ERR_ARGUMENT = 9,  /* null pointer, bad length, unknown name */
  UNCERANK_ERR_INTERNAL = 10
} uncerank_status;

typedef struct uncerank_config uncerank_config;

UNCERANK_API const char* uncerank_version(void);
UNCERANK_API const char* uncerank_last_error(void);
UNCERANK_API const char* uncerank_status_name(uncerank_status status);
/* Process exit code used by the CLI: 0 ok, 2 config, 3 data or protocol, 4 I/O. */
UNCERANK_API int uncerank_exit_code(uncerank_status status);

/* --- configuration ------------------------------------------------------ */

/* Parses and validates a key = value config file. */
UNCERANK_API uncerank_status uncerank_config_load(const char* path, uncerank_config** out);
/* Overrides one key and re-validates; the handle is unchanged on failure. */
UNCERANK_API uncerank_status uncerank_config_set(uncerank_config* cfg, const char* key, const char* value);
UNCERANK_API void uncerank_config_free(uncerank_config* cfg);
/* Writes the NUL-terminated run id (16 hex digits) into buf. */
UNCERANK_API uncerank_status uncerank_config_run_id(const uncerank_config* cfg, char* buf, size_t len);

/* --- commands ----------------------------------------------------------- */

/* command is one of simulate, train, calibrate, eval, ablate, report. */
UNCERANK_API uncerank_status uncerank_run(const uncerank_config* cfg, const char* command);

/* --- Beta head ---------------------------------------------------------- */

/* alpha = 1 + softplus(u), beta = 1 + softplus(v). */
UNCERANK_API uncerank_status uncerank_beta_from_logits(double u, double v, double* alpha, double* beta);
/* Prior variance of theta ~ Beta(alpha, beta); requires alpha, beta > 0. */
UNCERANK_API uncerank_status uncerank_u_prob(double alpha, double beta, double* out);
UNCERANK_API uncerank_status uncerank_variance_decomposition(double alpha, double beta, double* aleatoric,
                                                             double* epistemic, double* total);
UNCERANK_API uncerank_status uncerank_bayes_marginal_loglik(double alpha, double beta, int y, double* out);

/* --- calibration and ranking -------------------------------------------- */

/* Nearest-rank quantile: the ceil(q n)-th smallest value. */
UNCERANK_API uncerank_status uncerank_quantile(const double* values, size_t n, double q, double* out);
/* r - D if either channel exceeds its threshold, else r. */
UNCERANK_API uncerank_status uncerank_score_lau(double r, double u_point, double u_prob, double tau_point,
                                                double tau_prob, double D, double* out);
/* r + omega max(u_point, u_prob). */
UNCERANK_API uncerank_status uncerank_score_hau(double r, double u_point, double u_prob, double omega, double* out);

/* --- metrics ------------------------------------------------------------ */

UNCERANK_API uncerank_status uncerank_aurc(const double* u, const double* e, size_t n, double* aurc,
                                           double* base_risk);
UNCERANK_API uncerank_status uncerank_spearman(const double* u, const double* e, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* UNCERANK_UNCERANK_H_ */
