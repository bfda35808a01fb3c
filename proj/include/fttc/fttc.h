/* C interface to the fttc propagation library. */
#ifndef FTTC_FTTC_H
#define FTTC_FTTC_H

#include <stddef.h>

#if defined(_WIN32)
#define FTTC_API __declspec(dllexport)
#else
#define FTTC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fttc_status {
  FTTC_OK = 0,
  FTTC_ERR_INVALID_ARGUMENT = 1,
  FTTC_ERR_CONFIG = 2,
  FTTC_ERR_DIVERGENCE = 3,
  FTTC_ERR_IO = 4,
  FTTC_ERR_NUMERICAL = 5,
  FTTC_ERR_INTERNAL = 6
} fttc_status;

typedef struct fttc_config fttc_config;
typedef struct fttc_result fttc_result;
typedef struct fttc_state fttc_state;

typedef struct fttc_options {
  const char* out_dir; /* NULL keeps the config's out_dir */
  size_t jobs;         /* 0 or 1 runs sweep points sequentially */
  int verbose;         /* progress lines on stderr */
} fttc_options;

/* Message of the last failing call on this thread; never NULL. */
FTTC_API const char* fttc_last_error(void);
FTTC_API const char* fttc_version(void);

/* Thread count of the BLAS backend when it exposes one; returns 0 if it does not. */
FTTC_API int fttc_set_threads(int n);

/* Strings returned through char** are owned by the caller. */
FTTC_API void fttc_string_free(char* s);

FTTC_API fttc_status fttc_config_parse(const char* text, fttc_config** out);
FTTC_API fttc_status fttc_config_load(const char* path, fttc_config** out);
FTTC_API void fttc_config_free(fttc_config* cfg);
/* Applies one `key = value` assignment and revalidates. */
FTTC_API fttc_status fttc_config_set(fttc_config* cfg, const char* key, const char* value);
FTTC_API fttc_status fttc_config_print(const fttc_config* cfg, char** out);
FTTC_API fttc_status fttc_config_defaults(char** out);

/* Single run; writes survival.csv, slices, checkpoints and run_report.json. */
FTTC_API fttc_status fttc_run(const fttc_config* cfg, const fttc_options* opts,
                              fttc_result** out);
/* Convergence study over t_list x n_list; writes converge.csv. Rows hold
   (t_final, n_terms, l2_error). */
FTTC_API fttc_status fttc_converge(const fttc_config* cfg, const fttc_options* opts,
                                   fttc_result** out);
/* Split-operator comparison over dt_list; writes soft_compare.csv. Rows hold
   (dt, err_ttc, err_soft, acorr_err_ttc, acorr_err_soft). */
FTTC_API fttc_status fttc_soft_compare(const fttc_config* cfg, const fttc_options* opts,
                                       fttc_result** out);
FTTC_API void fttc_result_free(fttc_result* res);

/* Tabular view of a result: run rows are (t, re_s, im_s, abs_s, norm, max_rank). */
FTTC_API size_t fttc_result_rows(const fttc_result* res);
FTTC_API size_t fttc_result_cols(const fttc_result* res);
FTTC_API double fttc_result_value(const fttc_result* res, size_t row, size_t col);
FTTC_API size_t fttc_result_max_rank(const fttc_result* res);
FTTC_API double fttc_result_max_norm_drift(const fttc_result* res);
FTTC_API double fttc_result_wall_seconds(const fttc_result* res);
FTTC_API size_t fttc_result_warning_count(const fttc_result* res);
FTTC_API const char* fttc_result_warning(const fttc_result* res, size_t i);

/* J_0(x) .. J_{n-1}(x) into values[0..n). */
FTTC_API fttc_status fttc_bessel(double x, size_t n, double* values);
FTTC_API fttc_status fttc_bessel_csv(double x, size_t n, const char* path);

/* Checkpoint access; the file kind (grid or functional) is detected. */
FTTC_API fttc_status fttc_state_load(const char* path, fttc_state** out);
FTTC_API void fttc_state_free(fttc_state* st);
FTTC_API int fttc_state_is_functional(const fttc_state* st);
FTTC_API size_t fttc_state_order(const fttc_state* st);
FTTC_API size_t fttc_state_max_rank(const fttc_state* st);
/* Grid states: Frobenius norm of the samples, no volume element.
   Functional states: L2 norm of the function. */
FTTC_API double fttc_state_norm(const fttc_state* st);
/* Norm of a - b in the same sense; both states must be of the same kind. */
FTTC_API fttc_status fttc_state_distance(const fttc_state* a, const fttc_state* b,
                                         double* out);

#ifdef __cplusplus
}
#endif

#endif
