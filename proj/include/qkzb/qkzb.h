#ifndef QKZB_QKZB_H
#define QKZB_QKZB_H

#if defined(QKZB_BUILDING)
#define QKZB_API __attribute__((visibility("default")))
#else
#define QKZB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qkzb_status {
    QKZB_OK = 0,
    QKZB_ERR_DOMAIN = 1,
    QKZB_ERR_POLE = 2,
    QKZB_ERR_SINGULAR = 3,
    QKZB_ERR_GRID_MISMATCH = 4,
    QKZB_ERR_DIVERGENCE = 5,
    QKZB_ERR_INVALID_CONFIG = 6,
    QKZB_ERR_UNKNOWN_SUITE = 7,
    QKZB_ERR_NOT_IMPLEMENTED = 8,
    QKZB_ERR_CONTOUR_PINCH = 9,
    QKZB_ERR_FUSION_SINGULAR = 10,
    QKZB_ERR_INVALID_ARGUMENT = 11,
    QKZB_ERR_INTERNAL = 12
} qkzb_status;

typedef struct qkzb_context qkzb_context;

QKZB_API qkzb_status qkzb_context_create(qkzb_context** out);
QKZB_API void qkzb_context_destroy(qkzb_context* ctx);

/* message of the last failed call on ctx; empty after a successful call */
QKZB_API const char* qkzb_last_error(const qkzb_context* ctx);
QKZB_API const char* qkzb_status_name(qkzb_status s);
/* process exit code for a status: 0, 1 or 2 */
QKZB_API int qkzb_exit_code(qkzb_status s);
QKZB_API const char* qkzb_build_timestamp(void);

/* strings returned through char** are owned by the caller */
QKZB_API void qkzb_string_free(char* s);

/* JSON array of suite names */
QKZB_API qkzb_status qkzb_list_suites(qkzb_context* ctx, char** out_json);
/* JSON array of check names for a suite */
QKZB_API qkzb_status qkzb_list_checks(qkzb_context* ctx, const char* suite, char** out_json);
/* JSON array of eval target names */
QKZB_API qkzb_status qkzb_list_targets(qkzb_context* ctx, char** out_json);

/* config_json: {"suite", "parameters", "tolerances", "quadrature", "seed"}.
   On QKZB_OK the report is in *out_report and *out_passed is 1 when every check passed. */
QKZB_API qkzb_status qkzb_run_suite(qkzb_context* ctx, const char* config_json, double tolerance_scale,
                                    char** out_report, int* out_passed);

/* args_json: object of target arguments */
QKZB_API qkzb_status qkzb_eval(qkzb_context* ctx, const char* target, const char* args_json, double* out_re,
                               double* out_im);

/* "re+imi" with 15 significant digits */
QKZB_API qkzb_status qkzb_format_complex(double re, double im, char** out);

#ifdef __cplusplus
}
#endif

#endif
