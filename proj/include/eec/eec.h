#ifndef EEC_EEC_H
#define EEC_EEC_H

/*
 * C interface to the expected Euler characteristic library.
 *
 * Every function returns an eec_status; on failure the message (and, for
 * configuration errors, the line and field) of the calling thread's last
 * error is available until the next failing call on that thread. Handles are
 * opaque, owned by the caller and released with the matching _free function;
 * _free accepts NULL. Matrices are dense row-major n x n arrays.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EEC_BUILDING_LIBRARY)
#    define EEC_API __declspec(dllexport)
#  else
#    define EEC_API __declspec(dllimport)
#  endif
#else
#  define EEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eec_status {
    EEC_OK = 0,
    EEC_ERR_DOMAIN = 1,        /* argument outside the mathematical domain */
    EEC_ERR_SINGULAR = 2,      /* a matrix that must be positive definite is not */
    EEC_ERR_MODEL = 3,         /* model construction rejected */
    EEC_ERR_CONFIG = 4,        /* invalid run configuration */
    EEC_ERR_NUMERIC = 5,       /* numerical failure during evaluation */
    EEC_ERR_VERIFY_FAILED = 6, /* at least one verification check failed */
    EEC_ERR_IO = 7,            /* file could not be read or written */
    EEC_ERR_INVALID_ARG = 8,   /* NULL handle or output pointer, bad size */
    EEC_ERR_INTERNAL = 9       /* unexpected failure */
} eec_status;

EEC_API const char* eec_status_name(eec_status status);
/* Never NULL; empty when the thread has not failed yet. */
EEC_API const char* eec_last_error(void);
/* Config line of the last EEC_ERR_CONFIG, 0 when not tied to a line. */
EEC_API int eec_last_error_line(void);
/* Config field of the last EEC_ERR_CONFIG, or "". */
EEC_API const char* eec_last_error_field(void);

/* ---- run configuration ---- */

typedef struct eec_config eec_config;

EEC_API eec_status eec_config_load(const char* path, eec_config** out);
EEC_API eec_status eec_config_parse(const char* text, eec_config** out);
EEC_API void eec_config_free(eec_config* config);
/* Canonical text; release with eec_string_free. */
EEC_API eec_status eec_config_serialize(const eec_config* config, char** text);
EEC_API void eec_string_free(char* text);
/* output.path, or "" when unset. Valid while the config lives. */
EEC_API const char* eec_config_output_path(const eec_config* config);
/* 1 when the config equals the other one field by field. */
EEC_API int eec_config_equal(const eec_config* a, const eec_config* b);

/* ---- batch commands; CSV goes to out_path, or stdout when NULL/empty ---- */

EEC_API eec_status eec_run_eec(const eec_config* config, const char* out_path);
EEC_API eec_status eec_run_asymptotic(const eec_config* config, const char* out_path);

typedef struct eec_verify_options {
    int use_seed;  /* nonzero: seed overrides the configured seed */
    uint64_t seed;
    int run_mc;    /* zero: deterministic checks only */
} eec_verify_options;

typedef struct eec_verify_report eec_verify_report;

/* Runs every check. *out receives the report whenever the checks ran, and
 * the status is EEC_ERR_VERIFY_FAILED when any of them failed. */
EEC_API eec_status eec_run_verify(const eec_config* config, const eec_verify_options* options,
                                  eec_verify_report** out);
EEC_API size_t eec_verify_report_count(const eec_verify_report* report);
/* Pointers stay valid while the report lives. */
EEC_API eec_status eec_verify_report_check(const eec_verify_report* report, size_t index, const char** name,
                                           int* passed, const char** detail);
EEC_API void eec_verify_report_free(eec_verify_report* report);

/* ---- direct evaluation for the problem described by a config ---- */

typedef struct eec_problem eec_problem;

EEC_API eec_status eec_problem_create(const eec_config* config, eec_problem** out);
EEC_API void eec_problem_free(eec_problem* problem);
/* Expected Euler characteristic at u; tail_bound may be NULL. */
EEC_API eec_status eec_problem_eec(const eec_problem* problem, double u, double* total, double* tail_bound);
/* Rectangle problems only; EEC_ERR_DOMAIN without a unique interior maximum. */
EEC_API eec_status eec_problem_laplace(const eec_problem* problem, double u, double* value);

/* ---- special functions and matrix expectations ---- */

EEC_API eec_status eec_hermite(int n, double x, double* out);
EEC_API eec_status eec_gaussian_tail(double x, double* out);
EEC_API eec_status eec_gegenbauer(int n, double lambda, double x, double* out);
EEC_API eec_status eec_minor_sum(const double* b, int n, int j, double* out);
EEC_API eec_status eec_expected_det_delta(const double* b, int n, double x, double* out);
EEC_API eec_status eec_expected_det_xi(const double* b, int n, double x, double* out);
/* out receives the n x n principal square root of b^{-1}. */
EEC_API eec_status eec_principal_sqrt_inv(const double* b, int n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* EEC_EEC_H */
