/* C interface to the holonomy bundle library: classification of 2-planes
 * spanned by cone matrices, totally geodesic charts, horizontal holonomy
 * transport, and the config-driven experiment runner behind the CLI.
 *
 * Conventions:
 *  - Complex matrices cross the boundary row-major as interleaved doubles
 *    [re, im, re, im, ...]; an m-by-n matrix occupies 2*m*n doubles.
 *  - Every function returns HB_OK on success. After a failure,
 *    hb_last_error() returns a thread-local description of the most recent
 *    failing call on the calling thread.
 *  - Strings returned through char** are heap-allocated; release them with
 *    hb_string_free. Curve, integrator, and quadrature arguments are JSON
 *    texts in the same schema the CLI configs use.
 */
#ifndef HOLOBUNDLE_H
#define HOLOBUNDLE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hb_status {
  HB_OK = 0,
  HB_CONFIG_ERROR,
  HB_DIMENSION_MISMATCH,
  HB_NOT_FINITE,
  HB_SIZE_LIMIT,
  HB_NOT_IN_CONE,
  HB_PLANE_DEGENERATE,
  HB_STAR_VIOLATED,
  HB_NOT_TOTALLY_GEODESIC,
  HB_NON_SIMPLE_CURVE,
  HB_NON_CLOSED_CURVE,
  HB_NOT_STAR_SHAPED,
  HB_QUADRATURE_NOT_CONVERGED,
  HB_BLOCK_LEAKAGE,
  HB_LAW_TOLERANCE_EXCEEDED,
  HB_SELFTEST_FAILED,
  HB_INVALID_ARGUMENT,
  HB_INTERNAL
} hb_status;

const char* hb_version(void);

const char* hb_status_name(hb_status s);

/* Process exit classes: 0 ok, 1 config error, 2 precondition violation,
 * 3 numeric failure. */
int hb_status_exit_class(hb_status s);

/* Message from the most recent failing call on this thread; "" if none. */
const char* hb_last_error(void);

void hb_string_free(char* s);

typedef enum hb_verdict {
  HB_VERDICT_NOT_TOTALLY_GEODESIC = 0,
  HB_VERDICT_FLAT = 1,
  HB_VERDICT_COMPLEX = 2
} hb_verdict;

typedef struct hb_classification {
  int verdict; /* hb_verdict */
  int has_mu;
  double mu_re; /* scalar X*Y = mu I, when has_mu */
  double mu_im;
  int has_lambda;
  double lambda; /* X*X = lambda I, when has_lambda */
  double closure_residual;
} hb_classification;

/* Classifies the real 2-plane spanned by the embeddings of the m-by-n
 * matrices X and Y. Any verdict is a success; precondition violations
 * (X outside the cone, degenerate span, non-scalar X*Y) are errors. */
hb_status hb_classify(int m, int n, const double* x, const double* y,
                      hb_classification* out);

/* Opaque chart over a totally geodesic plane. */
typedef struct hb_chart hb_chart;

/* Fails with HB_NOT_TOTALLY_GEODESIC when the plane does not close. */
hb_status hb_chart_create(int m, int n, const double* x, const double* y,
                          hb_chart** out);

void hb_chart_free(hb_chart* chart);

hb_status hb_chart_classification(const hb_chart* chart,
                                  hb_classification* out);

/* Holonomy of a closed curve in the chart. integrator_json and
 * quadrature_json may be NULL for defaults; *report_json receives the same
 * report object the holonomy verb emits. */
hb_status hb_chart_holonomy(const hb_chart* chart, const char* curve_json,
                            const char* integrator_json,
                            const char* quadrature_json, char** report_json);

/* Riemannian area enclosed by the curve in the chart. */
hb_status hb_chart_area(const hb_chart* chart, const char* curve_json,
                        const char* quadrature_json, double* area);

typedef struct hb_run_options {
  const char* output_path; /* overrides the config output file, may be NULL */
  const char* format;      /* "json", "csv", or "text" where supported */
  int has_tolerance;
  double tolerance;
  int has_seed;
  uint64_t seed;
} hb_run_options;

/* Config-driven runner behind the CLI verbs: classify, holonomy, area,
 * sweep, fiber-check, selftest. options and config_json may be NULL.
 * *payload always receives the run output, also on failure (a diagnostic
 * envelope). When written_path_opt is non-NULL it receives the path of the
 * output file if one was written, else NULL. */
hb_status hb_run(const char* verb, const char* config_json,
                 const hb_run_options* options, char** payload,
                 char** written_path_opt);

#ifdef __cplusplus
}
#endif

#endif /* HOLOBUNDLE_H */
