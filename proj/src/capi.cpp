#include "vibench.h"

#include <cstring>
#include <string>

#include "vibench/bench.hpp"

struct vib_problem {
  vibench::ProblemInstance inst;
};

struct vib_report {
  vibench::RunReport rep;
};

struct vib_rows {
  std::vector<vibench::TableRow> rows;
};

namespace {

thread_local std::string tls_last_error;

template <class Fn>
vib_status guarded(Fn&& fn) {
  try {
    fn();
    return VIB_OK;
  } catch (const std::invalid_argument& e) {
    tls_last_error = e.what();
    return VIB_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    tls_last_error = e.what();
    return VIB_ERROR_INTERNAL;
  }
}

vib_status fail(vib_status code, const char* message) {
  tls_last_error = message;
  return code;
}

vibench::SolverConfig to_config(const vib_config& c) {
  vibench::SolverConfig cfg;
  cfg.algorithm = static_cast<vibench::Algorithm>(c.algorithm);
  if (c.algorithm < 0 || c.algorithm > static_cast<int>(vibench::Algorithm::SUBPM)) {
    throw std::invalid_argument("vib_config: bad algorithm id");
  }
  if (c.lambda > 0.0) cfg.lambda = c.lambda;
  cfg.alpha = c.alpha;
  cfg.lambda_init = c.lambda_init;
  cfg.lambda_bar = c.lambda_bar;
  cfg.eps = c.eps;
  cfg.max_iter = c.max_iter;
  cfg.trace = c.trace != 0;
  return cfg;
}

vibench::ExperimentSpec to_spec(const vib_experiment& e) {
  if (!e.problem) throw std::invalid_argument("vib_experiment: problem name is null");
  vibench::ExperimentSpec spec;
  spec.problem = e.problem;
  spec.m = e.m;
  spec.seed = e.seed;
  spec.config = to_config(e.config);
  if (e.start && e.start_len > 0) {
    spec.start = vibench::Vector(e.start, e.start + e.start_len);
  }
  spec.random_start = e.random_start != 0;
  spec.repeats = e.repeats > 0 ? e.repeats : 1;
  return spec;
}

vib_status copy_out(const vibench::Vector& v, double* buf, long len) {
  if (!buf) return fail(VIB_ERROR_NULL_POINTER, "null output buffer");
  if (len < static_cast<long>(v.size())) {
    return fail(VIB_ERROR_BUFFER_TOO_SMALL, "output buffer too small");
  }
  std::memcpy(buf, v.data(), v.size() * sizeof(double));
  return VIB_OK;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* vib_status_name(vib_status status) {
  switch (status) {
    case VIB_OK: return "ok";
    case VIB_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case VIB_ERROR_NULL_POINTER: return "null pointer";
    case VIB_ERROR_BUFFER_TOO_SMALL: return "buffer too small";
    case VIB_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* vib_last_error(void) { return tls_last_error.c_str(); }

vib_status vib_algorithm_from_name(const char* name, int* out) {
  if (!name || !out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] { *out = static_cast<int>(vibench::algorithm_from_name(name)); });
}

vib_status vib_problem_create(const char* name, int m, uint64_t seed, vib_problem** out) {
  if (!name || !out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] { *out = new vib_problem{vibench::make_problem(name, m, seed)}; });
}

void vib_problem_destroy(vib_problem* problem) { delete problem; }

int vib_problem_dim(const vib_problem* problem) {
  return problem ? problem->inst.dim() : 0;
}

int vib_problem_has_lipschitz(const vib_problem* problem) {
  return problem && problem->inst.lipschitz ? 1 : 0;
}

double vib_problem_lipschitz(const vib_problem* problem) {
  return problem && problem->inst.lipschitz ? *problem->inst.lipschitz : 0.0;
}

int vib_problem_has_solution(const vib_problem* problem) {
  return problem && problem->inst.solution ? 1 : 0;
}

vib_status vib_problem_solution(const vib_problem* problem, double* buf, int len) {
  if (!problem) return fail(VIB_ERROR_NULL_POINTER, "null problem");
  if (!problem->inst.solution) {
    return fail(VIB_ERROR_INVALID_ARGUMENT, "problem has no known solution");
  }
  return copy_out(*problem->inst.solution, buf, len);
}

vib_status vib_problem_start(const vib_problem* problem, double* buf, int len) {
  if (!problem) return fail(VIB_ERROR_NULL_POINTER, "null problem");
  return copy_out(problem->inst.start, buf, len);
}

vib_status vib_problem_eval(const vib_problem* problem, const double* x, int len,
                            double* out) {
  if (!problem || !x || !out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] {
    vibench::Vector v(x, x + len);
    vibench::Vector fx = problem->inst.eval(v);
    std::memcpy(out, fx.data(), fx.size() * sizeof(double));
  });
}

uint64_t vib_problem_eval_count(const vib_problem* problem) {
  return problem ? problem->inst.eval_count() : 0;
}

void vib_config_defaults(vib_config* cfg, int algorithm) {
  if (!cfg) return;
  cfg->algorithm = algorithm;
  cfg->lambda = 0.0;
  cfg->alpha = 0.4;
  cfg->lambda_init = 0.01;
  cfg->lambda_bar = 1e6;
  cfg->eps = 1e-3;
  cfg->max_iter = 100000;
  cfg->trace = 0;
}

vib_status vib_solve(const vib_problem* problem, const vib_config* cfg,
                     const double* start, int start_len, vib_report** out) {
  if (!problem || !cfg || !out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] {
    vibench::ProblemInstance inst = problem->inst;
    if (start && start_len > 0) {
      vibench::Vector s(start, start + start_len);
      vibench::ensure_finite(s, "vib_solve start");
      if (static_cast<int>(s.size()) != inst.dim()) {
        throw std::invalid_argument("vib_solve: start dimension mismatch");
      }
      inst.start = std::move(s);
    }
    *out = new vib_report{vibench::solve(inst, to_config(*cfg))};
  });
}

void vib_report_destroy(vib_report* report) { delete report; }

long vib_report_iterations(const vib_report* r) { return r ? r->rep.iterations : 0; }
long vib_report_np(const vib_report* r) { return r ? r->rep.np : 0; }
long vib_report_nf(const vib_report* r) { return r ? r->rep.nf : 0; }
long vib_report_repaired(const vib_report* r) { return r ? r->rep.repaired_iterations : 0; }

double vib_report_final_residual(const vib_report* r) {
  return r ? r->rep.final_residual : 0.0;
}

int vib_report_terminated(const vib_report* r) {
  return r ? static_cast<int>(r->rep.terminated) : VIB_TERMINATED_MAX_ITER;
}

int vib_report_dim(const vib_report* r) {
  return r ? static_cast<int>(r->rep.final_x.size()) : 0;
}

vib_status vib_report_final_x(const vib_report* r, double* buf, int len) {
  if (!r) return fail(VIB_ERROR_NULL_POINTER, "null report");
  return copy_out(r->rep.final_x, buf, len);
}

long vib_report_residual_history_size(const vib_report* r) {
  return r ? static_cast<long>(r->rep.residual_history.size()) : 0;
}

vib_status vib_report_residual_history(const vib_report* r, double* buf, long len) {
  if (!r) return fail(VIB_ERROR_NULL_POINTER, "null report");
  return copy_out(r->rep.residual_history, buf, len);
}

long vib_report_lambda_history_size(const vib_report* r) {
  return r ? static_cast<long>(r->rep.lambda_history.size()) : 0;
}

vib_status vib_report_lambda_history(const vib_report* r, double* buf, long len) {
  if (!r) return fail(VIB_ERROR_NULL_POINTER, "null report");
  return copy_out(r->rep.lambda_history, buf, len);
}

vib_status vib_rows_create(vib_rows** out) {
  if (!out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  *out = new vib_rows{};
  return VIB_OK;
}

void vib_rows_destroy(vib_rows* rows) { delete rows; }

long vib_rows_count(const vib_rows* rows) {
  return rows ? static_cast<long>(rows->rows.size()) : 0;
}

long vib_rows_nonconverged(const vib_rows* rows) {
  if (!rows) return 0;
  long n = 0;
  for (const auto& r : rows->rows) {
    if (r.terminated != "Converged") ++n;
  }
  return n;
}

vib_status vib_run_experiment(const vib_experiment* experiment, vib_rows* into) {
  if (!experiment || !into) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] {
    auto rows = vibench::run_experiment(to_spec(*experiment));
    into->rows.insert(into->rows.end(), rows.begin(), rows.end());
  });
}

vib_status vib_run_table(int table_id, uint64_t seed, vib_rows* into) {
  if (!into) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] {
    auto rows = vibench::run_table(table_id, seed);
    into->rows.insert(into->rows.end(), rows.begin(), rows.end());
  });
}

vib_status vib_rows_csv(const vib_rows* rows, char** out) {
  if (!rows || !out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] { *out = dup_string(vibench::emit_csv(rows->rows)); });
}

vib_status vib_rows_markdown(const vib_rows* rows, int paper_layout, char** out) {
  if (!rows || !out) return fail(VIB_ERROR_NULL_POINTER, "null argument");
  return guarded([&] {
    *out = dup_string(paper_layout ? vibench::emit_markdown_paper(rows->rows)
                                   : vibench::emit_markdown(rows->rows));
  });
}

void vib_string_free(char* s) { delete[] s; }

vib_status vib_audit_experiment(const vib_experiment* experiment, long* checked,
                                long* violations) {
  if (!experiment || !checked || !violations) {
    return fail(VIB_ERROR_NULL_POINTER, "null argument");
  }
  return guarded([&] {
    auto result = vibench::audit_experiment(to_spec(*experiment));
    *checked = result.checked;
    *violations = result.violations;
  });
}

}  // extern "C"
