/*
 * profitscape - profit-landscape fractality toolkit: C API.
 *
 * Stochastic daily price generators (GBM, fractional Brownian motion,
 * symmetric alpha-stable Levy, binomial Markov-switching multifractal),
 * a two-threshold trading backtest, profit-landscape construction with
 * local-maxima counting, and power-law scaling fits.
 *
 * Conventions:
 *   - every function returns a pl_status; PL_OK is 0,
 *   - on failure pl_last_error() describes the problem (thread-local),
 *   - objects returned through out-parameters are owned by the caller and
 *     released with the matching *_free function,
 *   - randomness is a pure function of (master_seed, stream): same pair,
 *     bit-identical output. Ensembles use stream = realization index.
 */
#ifndef PROFITSCAPE_H
#define PROFITSCAPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PL_API __declspec(dllexport)
#else
#define PL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
    PL_OK = 0,
    PL_ERR_VALIDATION = 1,        /* bad data or parameters */
    PL_ERR_IO = 2,                /* filesystem failure */
    PL_ERR_PARSE = 3,             /* malformed file contents */
    PL_ERR_RANGE = 4,             /* index out of range */
    PL_ERR_INSUFFICIENT_DATA = 5, /* fit with < 3 positive points */
    PL_ERR_INVALID_ARG = 6,       /* NULL or otherwise unusable argument */
    PL_ERR_INTERNAL = 7
} pl_status;

typedef struct pl_series pl_series;           /* a daily price series */
typedef struct pl_series_list pl_series_list; /* an owning list of series */
typedef struct pl_grid pl_grid;               /* an N x N profit landscape */

PL_API const char* pl_version(void);

/* Message for the most recent failure on this thread; never NULL. */
PL_API const char* pl_last_error(void);

/* ---- price series ---------------------------------------------------- */

PL_API pl_status pl_series_create(const double* values, size_t count, const char* label,
                                  pl_series** out);
PL_API pl_status pl_series_load_csv(const char* path, pl_series** out);
PL_API pl_status pl_series_save_csv(const pl_series* s, const char* path);
PL_API size_t pl_series_length(const pl_series* s);
PL_API const double* pl_series_values(const pl_series* s); /* valid while s lives */
PL_API const char* pl_series_label(const pl_series* s);
PL_API void pl_series_free(pl_series* s);

/* Loads every *.csv in a directory, sorted by filename. */
PL_API pl_status pl_series_load_dir(const char* dir, pl_series_list** out);
PL_API size_t pl_series_list_size(const pl_series_list* list);
PL_API const pl_series* pl_series_list_get(const pl_series_list* list, size_t index);
PL_API void pl_series_list_free(pl_series_list* list);

/* out must hold pl_series_length(s) - lag values. */
PL_API pl_status pl_log_returns(const pl_series* s, size_t lag, double* out);

/* Uniformly permutes the lag-1 returns and rebuilds the price path. */
PL_API pl_status pl_shuffle_returns(const pl_series* s, uint64_t master_seed, uint64_t stream,
                                    pl_series** out);

/* mu = mean + sigma^2/2 and sigma = n-1 stddev of the lag-1 log returns. */
PL_API pl_status pl_estimate_drift_vol(const pl_series* s, double* mu, double* sigma);

/* ---- generators ------------------------------------------------------ */

PL_API pl_status pl_gen_gbm(double mu, double sigma, double s0, size_t length,
                            uint64_t master_seed, uint64_t stream, pl_series** out);

PL_API pl_status pl_gen_fbm(double hurst, double mu, double sigma, double s0, size_t length,
                            uint64_t master_seed, uint64_t stream, pl_series** out);

/* scale == 0 selects the calibrated default: the scale that makes the IQR of
 * the daily increments equal calibration_sigma. */
PL_API pl_status pl_gen_levy(double alpha, double scale, double calibration_sigma, double s0,
                             size_t length, uint64_t master_seed, uint64_t stream,
                             pl_series** out);

PL_API pl_status pl_gen_msm(double m0, int components, double gamma_high, double growth,
                            double sigma_bar, double s0, size_t length, uint64_t master_seed,
                            uint64_t stream, pl_series** out);

/* ---- backtest --------------------------------------------------------- */

enum { PL_STRATEGY_S1 = 0, PL_STRATEGY_S2 = 1 };

typedef struct pl_strategy {
    int kind;        /* PL_STRATEGY_S1: sell on R > p, buy on R < -q; S2 swaps */
    double p, q;     /* thresholds, >= 0 */
    size_t lag;      /* d, days between compared prices, >= 1 */
    double buy_fraction, sell_fraction; /* in [0, 1] */
    double fee;      /* commission rate, e.g. 0.001 */
} pl_strategy;

typedef struct pl_backtest_result {
    double pi; /* (final value - initial cash) / initial cash */
    double final_cash;
    double final_shares;
    long trade_count;
} pl_backtest_result;

PL_API pl_status pl_backtest(const pl_series* s, const pl_strategy* strategy,
                             double initial_cash, pl_backtest_result* out);

/* ---- profit landscape -------------------------------------------------- */

enum { PL_VON_NEUMANN = 0, PL_MOORE = 1 };

/* Evaluates profit at (p_i, q_j) = domain_scale * (i + 1/2) / N for
 * i, j = 0..N-1; strategy p/q are ignored (the grid supplies them). */
PL_API pl_status pl_landscape_build(const pl_series* s, const pl_strategy* strategy,
                                    int resolution, double domain_scale, double initial_cash,
                                    pl_grid** out);
PL_API int pl_grid_resolution(const pl_grid* g);
PL_API const double* pl_grid_values(const pl_grid* g); /* row-major, N*N */
PL_API pl_status pl_grid_save_csv(const pl_grid* g, const char* path);
PL_API pl_status pl_grid_count_maxima(const pl_grid* g, int neighborhood, long* out);
PL_API void pl_grid_free(pl_grid* g);

/* M(N) over a strictly increasing ladder; out_maxima holds count values. */
PL_API pl_status pl_sweep(const pl_series* s, const pl_strategy* strategy,
                          const int* resolutions, size_t count, int neighborhood,
                          double domain_scale, double initial_cash, long* out_maxima);
PL_API pl_status pl_sweep_save_csv(const int* resolutions, const long* maxima, size_t count,
                                   const char* path);

/* ---- power-law fit ------------------------------------------------------ */

typedef struct pl_fit {
    double a;
    double log_intercept;
    double stderr_a;
    double r_squared;
} pl_fit;

/* OLS of ln M on ln N over the `window` largest N (0 -> largest half);
 * points with M <= 0 are dropped, < 3 survivors fail. */
PL_API pl_status pl_fit_exponent(const double* n_values, const double* m_values, size_t count,
                                 size_t window, pl_fit* out);

/* Reads a two-column "N,M" CSV, fits, and returns the JSON fit report
 * (free with pl_string_free). */
PL_API pl_status pl_fit_sweep_csv(const char* csv_path, size_t window, const char* label,
                                  char** json_out);

/* ---- experiments -------------------------------------------------------- */

/* Runs a JSON experiment config (single object or batch; see README),
 * writes all artifacts, and returns the summary JSON. output_dir_override
 * and seed_override may be NULL; jobs <= 0 uses all cores. */
PL_API pl_status pl_run_experiment(const char* config_json, const char* output_dir_override,
                                   const uint64_t* seed_override, int jobs, char** summary_out);

PL_API void pl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PROFITSCAPE_H */
