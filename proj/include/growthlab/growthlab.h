#ifndef GROWTHLAB_H
#define GROWTHLAB_H

/* Stable C interface to the growthlab core. Handles are opaque; every
 * fallible call returns a gl_status and leaves a message for
 * gl_last_error() on the calling thread. Strings returned through char**
 * are owned by the caller and released with gl_string_free. */

#include <stddef.h>

#if defined(_WIN32)
#if defined(GROWTHLAB_BUILDING)
#define GL_API __declspec(dllexport)
#else
#define GL_API __declspec(dllimport)
#endif
#else
#define GL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gl_status {
  GL_OK = 0,
  GL_ERR_DOMAIN,
  GL_ERR_OVERFLOW,
  GL_ERR_POLE,
  GL_ERR_POLE_ON_CIRCLE,
  GL_ERR_ON_CIRCLE,
  GL_ERR_NON_INTEGRAL_WINDING,
  GL_ERR_SINGULAR_NODE,
  GL_ERR_NON_CONVERGENT,
  GL_ERR_BELOW_DOMAIN,
  GL_ERR_NON_LEVEL_ZERO,
  GL_ERR_BELOW_RANGE,
  GL_ERR_DEGENERATE_GRID,
  GL_ERR_BAD_BRACKET,
  GL_ERR_PARSE,
  GL_ERR_INVALID_ARGUMENT,
  GL_ERR_UNSUPPORTED,
  GL_ERR_INTERNAL
} gl_status;

typedef enum gl_format { GL_FORMAT_JSON = 0, GL_FORMAT_CSV, GL_FORMAT_TABLE } gl_format;

typedef enum gl_verdict_kind {
  GL_CONVERGES = 0,
  GL_DIVERGES,
  GL_INDETERMINATE
} gl_verdict_kind;

typedef enum gl_lemma_behavior {
  GL_TENDS_TO_ZERO = 0,
  GL_BOUNDED_AWAY,
  GL_UNBOUNDED,
  GL_OSCILLATORY
} gl_lemma_behavior;

typedef enum gl_indicator_kind {
  GL_RHO = 0,
  GL_LAMBDA,
  GL_SIGMA,
  GL_SIGMA_BAR,
  GL_TAU,
  GL_TAU_BAR
} gl_indicator_kind;

/* exp applied `level` times to `mantissa`. */
typedef struct gl_tower {
  int level;
  double mantissa;
} gl_tower;

/* Radii r_j = exp^[q_anchor](t0 + j h), j = 0..J-1. */
typedef struct gl_grid {
  int q_anchor;
  double t0;
  double h;
  int J;
} gl_grid;

typedef struct gl_indicator {
  double value;
  double envelope_slope;
  double spread;
  int divergent;
} gl_indicator;

typedef struct gl_verdict {
  double k;
  gl_verdict_kind verdict;
  double decay_slope;
  int has_tail_bound;
  double tail_bound;
} gl_verdict;

typedef struct gl_nevanlinna_row {
  double r;
  double proximity;
  double counting;
  double characteristic;
} gl_nevanlinna_row;

typedef struct gl_model gl_model;
typedef struct gl_scale gl_scale;
typedef struct gl_indicators gl_indicators;
typedef struct gl_transition gl_transition;
typedef struct gl_report gl_report;

GL_API const char* gl_version(void);
GL_API const char* gl_status_name(gl_status status);
/* Message of the last failed call on this thread, "" if none. */
GL_API const char* gl_last_error(void);
GL_API void gl_string_free(char* s);

/* Tower arithmetic. */
GL_API gl_status gl_tower_from_double(double x, gl_tower* out);
GL_API gl_status gl_tower_iter_exp(gl_tower x, int k, gl_tower* out);
GL_API gl_status gl_tower_iter_log(gl_tower x, int k, gl_tower* out);
GL_API gl_status gl_tower_to_double(gl_tower x, double* out);
GL_API gl_status gl_tower_log_to_double(gl_tower x, double* out);

/* Function models. */
GL_API gl_status gl_model_parse(const char* literal, gl_model** out);
GL_API void gl_model_free(gl_model* model);
GL_API gl_status gl_model_literal(const gl_model* model, char** out);
GL_API gl_status gl_model_max_modulus(const gl_model* model, gl_tower r, gl_tower* out);
/* a == NULL counts poles (a = infinity); otherwise a points to {re, im}. */
GL_API gl_status gl_nevanlinna(const gl_model* model, double r, const double* a, int distinct,
                               gl_nevanlinna_row* out);
GL_API gl_status gl_nevanlinna_render(const gl_nevanlinna_row* rows, size_t n, gl_format format,
                                      char** out);

/* Growth scales. */
GL_API gl_status gl_scale_parse(const char* literal, gl_scale** out);
GL_API void gl_scale_free(gl_scale* scale);
GL_API gl_status gl_scale_literal(const gl_scale* scale, char** out);
GL_API gl_status gl_scale_eval(const gl_scale* scale, gl_tower x, gl_tower* out);
GL_API gl_status gl_scale_inverse(const gl_scale* scale, gl_tower y, gl_tower* out);

/* Default grids. */
GL_API gl_grid gl_default_order_grid(int q);
GL_API gl_grid gl_default_type_grid(int q, int oscillating);
GL_API gl_grid gl_default_integral_grid(int oscillating);

/* rho and lambda on order_grid, then the four types against them on
 * type_grid. NULL grids select the defaults. Types are skipped (reported as
 * divergent) when the order is not in (0, inf). */
GL_API gl_status gl_indicators_compute(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                                       const gl_grid* order_grid, const gl_grid* type_grid,
                                       gl_indicators** out);
GL_API void gl_indicators_free(gl_indicators* set);
/* GL_ERR_UNSUPPORTED when the indicator was skipped. */
GL_API gl_status gl_indicators_get(const gl_indicators* set, gl_indicator_kind kind,
                                   gl_indicator* out);
GL_API gl_status gl_indicators_render(const gl_indicators* set, gl_format format, char** out);
/* CSV of (indicator, t, ratio) over the tail windows, for plotting. */
GL_API gl_status gl_indicators_series(const gl_indicators* set, char** out);

/* Integral representation. NULL grid selects the default. */
GL_API gl_status gl_integral_classify(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                                      double A, double k, const gl_grid* grid, gl_verdict* out);
GL_API gl_status gl_verdict_render(const gl_verdict* verdict, gl_format format, char** out);
GL_API gl_status gl_integral_transition(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                                        double A, double k_lo, double k_hi, double tol,
                                        const gl_grid* grid, gl_transition** out);
GL_API void gl_transition_free(gl_transition* t);
GL_API gl_status gl_transition_bracket(const gl_transition* t, double* k_lo, double* k_hi,
                                       int* indeterminate_limited);
GL_API size_t gl_transition_size(const gl_transition* t);
GL_API gl_status gl_transition_verdict(const gl_transition* t, size_t i, gl_verdict* out);
GL_API gl_status gl_transition_render(const gl_transition* t, gl_format format, char** out);
GL_API gl_status gl_lemma_ratio(const gl_scale* alpha, const gl_scale* beta, int p, int q,
                                double A, double k, const gl_grid* grid, gl_lemma_behavior* out);

/* Verification suite. config_text uses the flat key=value format; an empty
 * text runs the standard catalog with default tolerances. */
GL_API gl_status gl_verify_run(const char* config_text, gl_report** out);
GL_API void gl_report_free(gl_report* report);
GL_API int gl_report_gates_pass(const gl_report* report);
GL_API size_t gl_report_rows(const gl_report* report);
GL_API gl_status gl_report_render(const gl_report* report, gl_format format, char** out);
GL_API gl_status gl_catalog_render(gl_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif
