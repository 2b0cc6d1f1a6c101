#ifndef HEXPERC_H
#define HEXPERC_H

/* C interface to the hexagonal-lattice percolation observables.
 *
 * Every function returning int returns a status code (HEXPERC_OK on
 * success). On failure hexperc_last_error() holds a message for the calling
 * thread until its next failing call. Handles are opaque; free each with its
 * matching *_free function (NULL is accepted). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HEXPERC_API __declspec(dllexport)
#else
#define HEXPERC_API __attribute__((visibility("default")))
#endif

enum {
    HEXPERC_OK = 0,
    HEXPERC_INVALID_ARGUMENT = 1,
    HEXPERC_EMPTY_DISCRETIZATION = 2,
    HEXPERC_MARK_COLLISION = 3,
    HEXPERC_OUTSIDE_DOMAIN = 4,
    HEXPERC_BOUNDARY_EDGE = 5,
    HEXPERC_OVERLAPPING_TRACES = 6,
    HEXPERC_TOO_LARGE = 7,
    HEXPERC_NOT_CONVERGED = 8,
    HEXPERC_DOMAIN_ERROR = 9,
    HEXPERC_DEGENERATE_POINTS = 10,
    HEXPERC_UNSUPPORTED_DOMAIN = 11,
    HEXPERC_SOLVER_DIVERGED = 12,
    HEXPERC_CONTOUR_LEAVES_DOMAIN = 13,
    HEXPERC_IO_ERROR = 14,
    HEXPERC_PARSE_ERROR = 15,
    HEXPERC_NOT_SIMPLY_CONNECTED = 16,
    HEXPERC_VERDICT_FAILED = 17,
    HEXPERC_INTERNAL = 99
};

typedef struct hexperc_config hexperc_config;
typedef struct hexperc_domain hexperc_domain;
typedef struct hexperc_field hexperc_field;
typedef struct hexperc_result hexperc_result;

HEXPERC_API const char* hexperc_version(void);
HEXPERC_API const char* hexperc_error_name(int code);
HEXPERC_API const char* hexperc_last_error(void);

/* Configuration: flat key=value pairs, later values replace earlier ones.
 * Keys are checked when the configuration is used. */
HEXPERC_API int hexperc_config_new(hexperc_config** out);
HEXPERC_API void hexperc_config_free(hexperc_config* cfg);
HEXPERC_API int hexperc_config_set(hexperc_config* cfg, const char* key, const char* value);
/* Keys already set are kept, so flags set before loading take precedence. */
HEXPERC_API int hexperc_config_load_file(hexperc_config* cfg, const char* path);
/* Validates the configuration; writes the 16-digit hash plus NUL (len >= 17). */
HEXPERC_API int hexperc_config_hash(const hexperc_config* cfg, char* buf, size_t len);

/* Discretization of the configured domain at its delta. */
HEXPERC_API int hexperc_domain_new(const hexperc_config* cfg, hexperc_domain** out);
HEXPERC_API void hexperc_domain_free(hexperc_domain* dom);
HEXPERC_API int hexperc_domain_face_count(const hexperc_domain* dom);
HEXPERC_API int hexperc_domain_vertex_count(const hexperc_domain* dom);
HEXPERC_API int hexperc_domain_vertex_position(const hexperc_domain* dom, int vertex, double* x, double* y);
HEXPERC_API int hexperc_domain_marks(const hexperc_domain* dom, int* l, int* r, int* w);

/* Monte Carlo estimate of the four observables from samples [0, n). */
HEXPERC_API int hexperc_field_sample(const hexperc_domain* dom, uint64_t seed, int64_t samples, int workers,
                                     hexperc_field** out);
HEXPERC_API void hexperc_field_free(hexperc_field* field);
HEXPERC_API int64_t hexperc_field_samples(const hexperc_field* field);
/* out[0..3] = H^l, H^r, H^u, H^d at the vertex. */
HEXPERC_API int hexperc_field_value(const hexperc_field* field, int vertex, double out[4]);
/* H = (H^l + H^r) - (sqrt(3)/2) i (H^u - H^d) and the standard errors of its
 * real and imaginary parts; any output pointer may be NULL. */
HEXPERC_API int hexperc_field_h(const hexperc_field* field, int vertex, double* re, double* im, double* se_re,
                                double* se_im);

/* Studies: field, crcheck, oracle, morera, converge, formulas, clusters,
 * invariance. A study that runs to completion returns HEXPERC_OK and a
 * result whether or not its verdicts pass. */
HEXPERC_API int hexperc_run_study(const hexperc_config* cfg, const char* study, hexperc_result** out);
HEXPERC_API void hexperc_result_free(hexperc_result* res);
HEXPERC_API int hexperc_result_all_pass(const hexperc_result* res);
HEXPERC_API int hexperc_result_verdict_count(const hexperc_result* res);
/* Strings stay valid until the result is freed; outputs may be NULL. */
HEXPERC_API int hexperc_result_verdict(const hexperc_result* res, int index, const char** name, int* pass,
                                       const char** detail);
HEXPERC_API int hexperc_result_file_count(const hexperc_result* res);
HEXPERC_API const char* hexperc_result_file(const hexperc_result* res, int index);

/* Special functions. */
HEXPERC_API int hexperc_hyp2f1(double a, double b, double c, double x, double* out);
HEXPERC_API int hexperc_cardy(double lambda, double* out);

#ifdef __cplusplus
}
#endif

#endif
