/* C interface to the mixed-precision Paterson-Stockmeyer library.
 *
 * Handles are opaque and owned by the caller; release them with the
 * matching *_free function. Strings returned through char** are allocated
 * by the library and released with mpps_string_free. Every function returns
 * a status code; on failure mpps_last_error() describes the problem (the
 * message is per thread and valid until the next call on that thread). */
#ifndef MPPS_H
#define MPPS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MPPS_BUILDING)
#    define MPPS_API __declspec(dllexport)
#  else
#    define MPPS_API __declspec(dllimport)
#  endif
#else
#  define MPPS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mpps_status {
  MPPS_OK = 0,
  MPPS_ERR_INVALID_ARGUMENT = 1,
  MPPS_ERR_DIMENSION = 2,
  MPPS_ERR_IO = 3,
  MPPS_ERR_NUMERICAL = 4, /* a numerical precondition failed (gamma_k invalid, ...) */
  MPPS_ERR_ACCEPTANCE = 5, /* at least one acceptance criterion failed */
  MPPS_ERR_INTERNAL = 6
} mpps_status;

typedef struct mpps_matrix mpps_matrix;
typedef struct mpps_series mpps_series;
typedef struct mpps_report mpps_report;

/* One experiment: a matrix, a series and the evaluation settings.
 * Initialise with mpps_experiment_defaults. */
typedef struct mpps_experiment {
  const char* matrix;      /* generator name or .json/.csv path */
  int n;
  uint64_t seed;
  double triu_scale;
  long scale_l;            /* X = 2^-scale_l A */
  int normalize;           /* nonzero: raise scale_l until ||X||_1 <= 1 */
  const char* series;      /* taylor_exp, pade_exp_num, pade_exp_den, taylor_cos_in_x_squared */
  int m;
  const char* series_path; /* optional custom series file; NULL when unused */
  int digits;
  double delta;
  int fix_params;
  const int* lattice;      /* optional digit lattice */
  size_t lattice_len;
  int compute_bound;
} mpps_experiment;

MPPS_API const char* mpps_version(void);
MPPS_API const char* mpps_last_error(void);
MPPS_API const char* mpps_status_name(mpps_status status);
MPPS_API void mpps_string_free(char* s);

MPPS_API void mpps_experiment_defaults(mpps_experiment* exp);

/* Matrices. */
MPPS_API mpps_status mpps_matrix_from_experiment(const mpps_experiment* exp, mpps_matrix** out);
MPPS_API mpps_status mpps_matrix_from_doubles(size_t rows, size_t cols, const double* re,
                                              const double* im, int digits, mpps_matrix** out);
MPPS_API mpps_status mpps_matrix_load(const char* path, int digits, mpps_matrix** out);
MPPS_API mpps_status mpps_matrix_save(const mpps_matrix* m, const char* path, const char* format);
MPPS_API mpps_status mpps_matrix_to_string(const mpps_matrix* m, const char* format, char** out);
MPPS_API size_t mpps_matrix_rows(const mpps_matrix* m);
MPPS_API size_t mpps_matrix_cols(const mpps_matrix* m);
MPPS_API int mpps_matrix_digits(const mpps_matrix* m);
MPPS_API mpps_status mpps_matrix_get(const mpps_matrix* m, size_t i, size_t j, double* re,
                                     double* im);
MPPS_API mpps_status mpps_matrix_one_norm(const mpps_matrix* m, double* out);
/* Nonzero when both matrices carry the same precision and bit patterns. */
MPPS_API int mpps_matrix_identical(const mpps_matrix* a, const mpps_matrix* b);
MPPS_API void mpps_matrix_free(mpps_matrix* m);

/* Coefficient series. */
MPPS_API mpps_status mpps_series_make(const char* family, int m, mpps_series** out);
MPPS_API mpps_status mpps_series_load(const char* path, mpps_series** out);
MPPS_API mpps_status mpps_series_to_json(const mpps_series* s, char** out);
MPPS_API int mpps_series_degree(const mpps_series* s);
MPPS_API void mpps_series_free(mpps_series* s);

/* Evaluation. The cosine series is evaluated at X^2, formed here. With
 * plan_only set the report carries the plan and a zero result. */
MPPS_API mpps_status mpps_evaluate(const mpps_matrix* x, const mpps_series* s,
                                   const mpps_experiment* settings, int plan_only,
                                   mpps_report** out);
MPPS_API mpps_status mpps_evaluate_fixed(const mpps_matrix* x, const mpps_series* s, int digits,
                                         mpps_report** out);
MPPS_API mpps_status mpps_report_result(const mpps_report* r, mpps_matrix** out);
MPPS_API mpps_status mpps_report_to_json(const mpps_report* r, int include_result, char** out);
MPPS_API double mpps_report_savings(const mpps_report* r);
MPPS_API int mpps_report_matmuls(const mpps_report* r);
MPPS_API void mpps_report_free(mpps_report* r);

/* Experiments returning JSON documents. */
MPPS_API mpps_status mpps_compare(const mpps_experiment* exp, char** json_out);
/* ms may hold one degree for every row, or one per precision; with
 * ms == NULL the cauchy(100) defaults for 32/64/128/256 digits are used. */
MPPS_API mpps_status mpps_table1(const mpps_experiment* exp, const int* digits, size_t n_digits,
                                 const int* ms, size_t n_ms, char** json_out);
/* criterion == 0 runs all; seed == 0 picks the built-in seed. Returns
 * MPPS_ERR_ACCEPTANCE when any failed; json_out is filled either way. */
MPPS_API mpps_status mpps_verify(uint64_t seed, int criterion, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
