#ifndef ETAS_H
#define ETAS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes shared with the CLI exit codes. */
#define ETAS_OK 0
#define ETAS_ERR_USAGE 1   /* bad input: config, catalog format, arguments */
#define ETAS_ERR_NUMERIC 2 /* numerical failure during a computation */

/* Message for the last failing call on this thread; empty string if none. */
const char* etas_last_error(void);

typedef struct etas_catalog etas_catalog;
typedef struct etas_result etas_result;

/* Strings returned through char** out-parameters are heap-allocated and
 * must be released with etas_free_string. */
void etas_free_string(char* s);

/* ---- catalogs -------------------------------------------------------- */

/* Parses a delimited event table. config_json must hold at least `window`;
 * `ties` / `jitter_eps` are honored when present. */
int etas_catalog_read(const char* text, const char* config_json, etas_catalog** out);
int etas_catalog_write(const etas_catalog* cat, char** out);
size_t etas_catalog_size(const etas_catalog* cat);
size_t etas_catalog_dropped_rows(const etas_catalog* cat);
void etas_catalog_free(etas_catalog* cat);

/* Simulates a catalog from a JSON SimConfig (window, params, gr_beta, seed). */
int etas_simulate(const char* config_json, etas_catalog** out);

/* ---- inference ------------------------------------------------------- */

int etas_fit(const etas_catalog* cat, const char* config_json, etas_result** out);
int etas_result_converged(const etas_result* res);
int etas_result_iterations(const etas_result* res);
/* 5-vectors indexed mu, K, alpha, c, p on the internal scale. */
int etas_result_mean(const etas_result* res, double out5[5]);
int etas_result_sd(const etas_result* res, double out5[5]);
int etas_result_write(const etas_result* res, char** out);
int etas_result_read(const char* text, etas_result** out);
void etas_result_free(etas_result* res);

/* Fits every binning grid cell in config_json (`deltas`, `growths`,
 * `n_maxes` arrays) and returns the comparison table. */
int etas_sweep_bins(const etas_catalog* cat, const char* config_json, char** out);

/* Surrogate dataset table at theta0 (debugging / inspection). */
int etas_surrogate_write(const etas_catalog* cat, const char* config_json, char** out);

/* ---- oracle & diagnostics ------------------------------------------- */

/* Runs the exact-likelihood MH sampler; returns the draws table. */
int etas_mcmc(const etas_catalog* cat, const char* config_json, char** out);

/* KS uniformity report plus posterior-predictive band table. `force`
 * permits a non-converged result. */
int etas_diagnose(const etas_catalog* cat, const etas_result* res, size_t n_samples,
                  uint64_t seed, int force, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ETAS_H */
