#include "vibench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "vibench/analysis.hpp"
#include "vibench/rng.hpp"

namespace vibench {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector sample_feasible_start(const ProblemInstance& problem, SplitMix64& rng) {
  const FeasibleSet& set = problem.set;
  if (set.kind() == FeasibleSet::Kind::ScaledSimplex) {
    // Uniform on the scaled simplex: normalized exponentials.
    Vector e(set.dim());
    double sum = 0.0;
    for (double& v : e) {
      v = -std::log(1.0 - rng.next_unit());
      sum += v;
    }
    if (sum <= 0.0) return Vector(set.dim(), set.simplex_total() / set.dim());
    for (double& v : e) v *= set.simplex_total() / sum;
    return e;
  }
  Vector p = problem.start;
  for (double& v : p) v += rng.next_uniform(-1.0, 1.0);
  return set.project(p);
}

ProblemInstance build_problem(const ExperimentSpec& spec) {
  return make_problem(spec.problem, spec.m, spec.seed);
}

SolverConfig resolve_config(const ProblemInstance& problem, const SolverConfig& in) {
  SolverConfig cfg = in;
  bool constant_step = cfg.algorithm == Algorithm::PRG || cfg.algorithm == Algorithm::EGM ||
                       cfg.algorithm == Algorithm::SUBEGM || cfg.algorithm == Algorithm::TBFM ||
                       cfg.algorithm == Algorithm::SUBPM;
  if (constant_step && !cfg.lambda && problem.lipschitz) {
    cfg.lambda = 0.4 / *problem.lipschitz;
  }
  return cfg;
}

ProblemInstance with_start(ProblemInstance problem, Vector start) {
  if (start.size() != static_cast<std::size_t>(problem.dim())) {
    throw std::invalid_argument("start override: dimension mismatch");
  }
  ensure_finite(start, "start override");
  problem.start = std::move(start);
  return problem;
}

TableRow make_row(const ExperimentSpec& spec, const ProblemInstance& problem,
                  const RunReport& rep, double wall) {
  TableRow row;
  row.problem = spec.problem;
  row.m = problem.dim();
  row.seed = spec.seed;
  row.solver = std::string(algorithm_name(spec.config.algorithm));
  row.eps = spec.config.eps;
  row.iterations = rep.iterations;
  row.np = rep.np;
  row.nf = rep.nf;
  row.wall_seconds = wall;
  row.final_residual = rep.final_residual;
  row.terminated = std::string(termination_name(rep.terminated));
  return row;
}

}  // namespace

std::vector<TableRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.repeats < 1) throw std::invalid_argument("run_experiment: repeats must be >= 1");
  if (spec.start && spec.random_start) {
    throw std::invalid_argument("run_experiment: fixed and random start both set");
  }
  std::vector<TableRow> rows;
  SplitMix64 start_rng(spec.seed);
  for (int rep_idx = 0; rep_idx < spec.repeats; ++rep_idx) {
    ProblemInstance problem = build_problem(spec);
    if (spec.start) {
      problem = with_start(std::move(problem), *spec.start);
    } else if (spec.random_start) {
      problem = with_start(std::move(problem), sample_feasible_start(problem, start_rng));
    }
    SolverConfig cfg = resolve_config(problem, spec.config);
    auto t0 = std::chrono::steady_clock::now();
    RunReport rep = solve(problem, cfg);
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    ExperimentSpec row_spec = spec;
    row_spec.config = cfg;
    rows.push_back(make_row(row_spec, problem, rep, dt.count()));
  }
  return rows;
}

std::vector<TableRow> run_table(int table_id, std::uint64_t seed) {
  std::vector<TableRow> rows;
  auto append = [&rows](const ExperimentSpec& spec) {
    auto r = run_experiment(spec);
    rows.insert(rows.end(), r.begin(), r.end());
  };

  switch (table_id) {
    case 1: {
      for (Algorithm alg : {Algorithm::EGM, Algorithm::SUBEGM, Algorithm::SUBPM, Algorithm::PRG}) {
        for (int m : {500, 1000, 2000, 4000}) {
          ExperimentSpec spec;
          spec.problem = "p1";
          spec.m = m;
          spec.seed = seed;
          spec.config.algorithm = alg;
          spec.config.lambda = 0.4;
          spec.config.eps = 1e-3;
          append(spec);
        }
      }
      break;
    }
    case 2: {
      for (int m : {10, 20, 50}) {
        for (std::uint64_t k = 0; k < 3; ++k) {
          for (Algorithm alg : {Algorithm::EGM, Algorithm::SUBEGM, Algorithm::TBFM,
                                Algorithm::SUBPM, Algorithm::PRG}) {
            ExperimentSpec spec;
            spec.problem = "p2";
            spec.m = m;
            spec.seed = seed + k;
            spec.config.algorithm = alg;
            spec.config.eps = 1e-3;  // lambda defaults to 0.4/L
            append(spec);
          }
        }
      }
      break;
    }
    case 3: {
      SplitMix64 rng(seed);
      ProblemInstance proto = problem3();
      std::vector<Vector> starts{Vector(4, 1.0), Vector{0.5, 0.5, 2.0, 1.0}};
      for (int i = 0; i < 3; ++i) starts.push_back(sample_feasible_start(proto, rng));
      for (const Vector& start : starts) {
        for (double eps : {1e-3, 1e-6}) {
          ExperimentSpec spec;
          spec.problem = "p3";
          spec.seed = seed;
          spec.config.algorithm = Algorithm::PRG_SAFE;
          spec.config.eps = eps;
          spec.start = start;
          append(spec);
        }
      }
      break;
    }
    case 4: {
      for (int m : {5, 50, 500, 1000}) {
        for (double eps : {1e-3, 1e-6}) {
          ExperimentSpec spec;
          spec.problem = "p4";
          spec.m = m;
          spec.seed = seed;
          spec.config.algorithm = Algorithm::PRG_SAFE;
          spec.config.eps = eps;
          append(spec);
        }
      }
      break;
    }
    case 5: {
      SplitMix64 rng(seed);
      ProblemInstance proto = problem5();
      std::vector<Vector> starts{Vector(5, 1.0), Vector(5, 0.0)};
      for (int i = 0; i < 2; ++i) starts.push_back(sample_feasible_start(proto, rng));
      for (const Vector& start : starts) {
        for (double eps : {1e-3, 1e-6}) {
          ExperimentSpec spec;
          spec.problem = "p5";
          spec.seed = seed;
          spec.config.algorithm = Algorithm::PRG_SAFE;
          spec.config.eps = eps;
          spec.start = start;
          append(spec);
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("run_table: table id must be 1..5");
  }
  return rows;
}

namespace {

const char* kCsvHeader =
    "problem,m,seed,solver,eps,iterations,np,nf,wall_seconds,final_residual,terminated";

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string emit_csv(const std::vector<TableRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  std::string out = kCsvHeader;
  out += '\n';
  for (const TableRow& r : rows) {
    out += csv_quote(r.problem);
    out += ',' + std::to_string(r.m);
    out += ',' + std::to_string(r.seed);
    out += ',' + csv_quote(r.solver);
    out += ',' + fmt_double(r.eps);
    out += ',' + std::to_string(r.iterations);
    out += ',' + std::to_string(r.np);
    out += ',' + std::to_string(r.nf);
    out += ',' + fmt_double(r.wall_seconds);
    out += ',' + fmt_double(r.final_residual);
    out += ',' + csv_quote(r.terminated);
    out += '\n';
  }
  return out;
}

std::vector<TableRow> parse_csv(const std::string& text) {
  std::vector<TableRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header");
      first = false;
      continue;
    }
    auto f = csv_split(line);
    if (f.size() != 11) throw std::invalid_argument("parse_csv: wrong field count");
    TableRow r;
    r.problem = f[0];
    r.m = std::stoi(f[1]);
    r.seed = std::stoull(f[2]);
    r.solver = f[3];
    r.eps = std::stod(f[4]);
    r.iterations = std::stol(f[5]);
    r.np = std::stol(f[6]);
    r.nf = std::stol(f[7]);
    r.wall_seconds = std::stod(f[8]);
    r.final_residual = std::stod(f[9]);
    r.terminated = f[10];
    rows.push_back(std::move(r));
  }
  if (first) throw std::invalid_argument("parse_csv: empty input");
  return rows;
}

std::string emit_markdown(const std::vector<TableRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("emit_markdown: no rows");
  std::string out =
      "| problem | m | seed | solver | eps | iterations | np | nf | wall_seconds | "
      "final_residual | terminated |\n"
      "|---|---|---|---|---|---|---|---|---|---|---|\n";
  char buf[64];
  for (const TableRow& r : rows) {
    out += "| " + r.problem + " | " + std::to_string(r.m) + " | " + std::to_string(r.seed) +
           " | " + r.solver + " | ";
    std::snprintf(buf, sizeof(buf), "%g", r.eps);
    out += std::string(buf) + " | " + std::to_string(r.iterations) + " | " +
           std::to_string(r.np) + " | " + std::to_string(r.nf) + " | ";
    std::snprintf(buf, sizeof(buf), "%.3g", r.wall_seconds);
    out += std::string(buf) + " | ";
    std::snprintf(buf, sizeof(buf), "%.3g", r.final_residual);
    out += std::string(buf) + " | " + r.terminated + " |\n";
  }
  return out;
}

std::string emit_markdown_paper(const std::vector<TableRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("emit_markdown_paper: no rows");
  struct Key {
    std::string problem;
    int m;
    std::uint64_t seed;
    double eps;
    bool operator==(const Key& o) const {
      return std::tie(problem, m, seed, eps) == std::tie(o.problem, o.m, o.seed, o.eps);
    }
  };
  struct Group {
    Key key;
    std::map<std::string, const TableRow*> cells;
  };
  std::vector<Group> groups;
  std::vector<std::string> solvers;
  for (const TableRow& r : rows) {
    Key k{r.problem, r.m, r.seed, r.eps};
    if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) {
      solvers.push_back(r.solver);
    }
    // first group with this key and a free cell; runs that differ only in
    // their starting point land on separate lines
    Group* slot = nullptr;
    for (Group& g : groups) {
      if (g.key == k && !g.cells.count(r.solver)) {
        slot = &g;
        break;
      }
    }
    if (!slot) {
      groups.push_back(Group{k, {}});
      slot = &groups.back();
    }
    slot->cells[r.solver] = &r;
  }
  // Groups in first-appearance order, one column per solver.
  std::string out = "| problem | m | seed | eps |";
  for (const auto& s : solvers) out += " " + s + " |";
  out += "\n|---|---|---|---|";
  for (std::size_t i = 0; i < solvers.size(); ++i) out += "---|";
  out += "\n";
  char buf[64];
  for (const Group& g : groups) {
    std::snprintf(buf, sizeof(buf), "%g", g.key.eps);
    out += "| " + g.key.problem + " | " + std::to_string(g.key.m) + " | " +
           std::to_string(g.key.seed) + " | " + buf + " |";
    for (const auto& s : solvers) {
      auto it = g.cells.find(s);
      if (it == g.cells.end()) {
        out += " - |";
        continue;
      }
      const TableRow* r = it->second;
      bool adaptive = r->solver == "PRG_SAFE" || r->solver == "PRG_ADAPT";
      if (adaptive) {
        out += " " + std::to_string(r->iterations) + " (" + std::to_string(r->np) + "/" +
               std::to_string(r->nf) + ") |";
      } else {
        out += " " + std::to_string(r->iterations) + " |";
      }
    }
    out += "\n";
  }
  return out;
}

AuditResult audit_experiment(const ExperimentSpec& spec) {
  ProblemInstance problem = build_problem(spec);
  if (spec.start) problem = with_start(std::move(problem), *spec.start);
  SolverConfig cfg = resolve_config(problem, spec.config);
  cfg.trace = true;
  RunReport rep = solve(problem, cfg);

  AuditResult result;
  if (rep.trace.size() < 2 || !problem.solution) return result;
  if (cfg.algorithm == Algorithm::PRG && problem.lipschitz) {
    result.checked = static_cast<long>(rep.trace.size()) - 1;
    result.violations = audit_descent(rep, problem, *cfg.lambda);
  } else if (cfg.algorithm == Algorithm::PRG_SAFE) {
    result.checked = static_cast<long>(rep.trace.size()) - 1;
    result.violations = audit_safe_descent(rep, problem, cfg.alpha, *problem.solution);
  }
  return result;
}

}  // namespace vibench
