/* vibench — monotone variational inequality solvers and benchmark harness.
 *
 * C interface for the shared library. All objects are opaque handles owned
 * by the library; every function that can fail returns a vib_status, and
 * vib_last_error() gives a thread-local message for the last failure.
 */
#ifndef VIBENCH_H
#define VIBENCH_H

#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

typedef enum vib_status {
  VIB_OK = 0,
  VIB_ERROR_INVALID_ARGUMENT = 1,
  VIB_ERROR_NULL_POINTER = 2,
  VIB_ERROR_BUFFER_TOO_SMALL = 3,
  VIB_ERROR_INTERNAL = 4
} vib_status;

typedef enum vib_algorithm {
  VIB_ALG_PRG = 0,       /* projected reflected gradient, constant stepsize */
  VIB_ALG_PRG_ADAPT = 1, /* adaptive stepsize, heuristic */
  VIB_ALG_PRG_SAFE = 2,  /* safeguarded adaptive stepsize */
  VIB_ALG_EGM = 3,       /* extragradient */
  VIB_ALG_SUBEGM = 4,    /* subgradient extragradient */
  VIB_ALG_TBFM = 5,      /* forward-backward-forward */
  VIB_ALG_SUBPM = 6      /* subgradient Popov */
} vib_algorithm;

typedef enum vib_terminated {
  VIB_TERMINATED_CONVERGED = 0,
  VIB_TERMINATED_MAX_ITER = 1,
  VIB_TERMINATED_STALLED = 2
} vib_terminated;

const char* vib_status_name(vib_status status);
const char* vib_last_error(void);
vib_status vib_algorithm_from_name(const char* name, int* out);

/* ---- problems ------------------------------------------------------- */

typedef struct vib_problem vib_problem;

/* name is one of "p1".."p5"; m may be 0 for problems with a fixed size;
 * seed only matters for the randomly generated problem p2. */
vib_status vib_problem_create(const char* name, int m, uint64_t seed,
                              vib_problem** out);
void vib_problem_destroy(vib_problem* problem);
int vib_problem_dim(const vib_problem* problem);
int vib_problem_has_lipschitz(const vib_problem* problem);
double vib_problem_lipschitz(const vib_problem* problem); /* 0 when unknown */
int vib_problem_has_solution(const vib_problem* problem);
vib_status vib_problem_solution(const vib_problem* problem, double* buf, int len);
vib_status vib_problem_start(const vib_problem* problem, double* buf, int len);
vib_status vib_problem_eval(const vib_problem* problem, const double* x, int len,
                            double* out);
uint64_t vib_problem_eval_count(const vib_problem* problem);

/* ---- solving --------------------------------------------------------- */

typedef struct vib_config {
  int algorithm;      /* vib_algorithm */
  double lambda;      /* <= 0 means unset */
  double alpha;       /* adaptive methods, in (0, sqrt(2)-1) */
  double lambda_init; /* first trial stepsize */
  double lambda_bar;  /* stepsize cap */
  double eps;
  long max_iter;
  int trace;
} vib_config;

void vib_config_defaults(vib_config* cfg, int algorithm);

typedef struct vib_report vib_report;

/* start may be NULL to use the problem's default starting point. */
vib_status vib_solve(const vib_problem* problem, const vib_config* cfg,
                     const double* start, int start_len, vib_report** out);
void vib_report_destroy(vib_report* report);
long vib_report_iterations(const vib_report* report);
long vib_report_np(const vib_report* report);
long vib_report_nf(const vib_report* report);
long vib_report_repaired(const vib_report* report);
double vib_report_final_residual(const vib_report* report);
int vib_report_terminated(const vib_report* report);
int vib_report_dim(const vib_report* report);
vib_status vib_report_final_x(const vib_report* report, double* buf, int len);
long vib_report_residual_history_size(const vib_report* report);
vib_status vib_report_residual_history(const vib_report* report, double* buf, long len);
long vib_report_lambda_history_size(const vib_report* report);
vib_status vib_report_lambda_history(const vib_report* report, double* buf, long len);

/* ---- benchmark harness ------------------------------------------------ */

typedef struct vib_experiment {
  const char* problem; /* p1..p5 */
  int m;
  uint64_t seed;
  vib_config config;
  const double* start; /* optional fixed start, length start_len */
  int start_len;
  int random_start;
  int repeats;
} vib_experiment;

typedef struct vib_rows vib_rows;

vib_status vib_rows_create(vib_rows** out);
void vib_rows_destroy(vib_rows* rows);
long vib_rows_count(const vib_rows* rows);
long vib_rows_nonconverged(const vib_rows* rows);

vib_status vib_run_experiment(const vib_experiment* experiment, vib_rows* into);
vib_status vib_run_table(int table_id, uint64_t seed, vib_rows* into);

/* Returned strings are heap-allocated; release with vib_string_free. */
vib_status vib_rows_csv(const vib_rows* rows, char** out);
vib_status vib_rows_markdown(const vib_rows* rows, int paper_layout, char** out);
void vib_string_free(char* s);

/* Re-runs the experiment with traces enabled and audits the per-iteration
 * descent inequality where a known solution (and stepsize theory) applies. */
vib_status vib_audit_experiment(const vib_experiment* experiment, long* checked,
                                long* violations);

#if defined(__cplusplus)
}
#endif

#endif /* VIBENCH_H */
