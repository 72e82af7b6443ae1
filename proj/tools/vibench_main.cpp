// vibench command line: runs single experiments or the built-in suites and
// prints CSV or Markdown. Exit codes: 0 all runs converged, 1 usage error,
// 2 some run hit the iteration cap or stalled, 3 a descent audit failed.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vibench.h"

namespace {

struct RunOptions {
  std::string problem;
  int m = 0;
  std::string solver = "PRG";
  double eps = 1e-3;
  double lambda = 0.0;
  double alpha = 0.4;
  double lambda_init = 0.01;
  double lambda_bar = 1e6;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int repeats = 1;
  std::string start;
  std::string out = "csv";
  std::string layout = "generic";
  bool audit = false;
  std::string config_file;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("VIBENCH_SEED");
  if (!env || !*env) return 0;
  return std::strtoull(env, nullptr, 10);
}

[[noreturn]] void die(const std::string& message) {
  std::cerr << "vibench: " << message << "\n";
  std::exit(1);
}

void check(vib_status status, const std::string& what) {
  if (status != VIB_OK) die(what + ": " + vib_last_error());
}

std::vector<double> parse_start(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      die("bad --start entry '" + item + "'");
    }
  }
  if (values.empty()) die("--start must list at least one coordinate");
  return values;
}

struct Experiment {
  RunOptions opt;
  std::vector<double> start_values;

  vib_experiment build() {
    vib_experiment e{};
    e.problem = opt.problem.c_str();
    e.m = opt.m;
    e.seed = opt.seed_given ? opt.seed : default_seed();
    vib_config_defaults(&e.config, VIB_ALG_PRG);
    int alg = 0;
    check(vib_algorithm_from_name(opt.solver.c_str(), &alg), "--solver");
    e.config.algorithm = alg;
    e.config.lambda = opt.lambda;
    e.config.alpha = opt.alpha;
    e.config.lambda_init = opt.lambda_init;
    e.config.lambda_bar = opt.lambda_bar;
    e.config.eps = opt.eps;
    e.repeats = opt.repeats;
    if (opt.start == "random" || opt.start == "random-feasible") {
      e.random_start = 1;
    } else if (!opt.start.empty()) {
      start_values = parse_start(opt.start);
      e.start = start_values.data();
      e.start_len = static_cast<int>(start_values.size());
    }
    return e;
  }
};

// Config file: '#' comments; '[run]' opens a section; key = value pairs with
// the same keys as the command-line flags.
std::vector<RunOptions> parse_config(const std::string& path, const RunOptions& base) {
  std::ifstream in(path);
  if (!in) die("cannot open config file '" + path + "'");
  std::vector<RunOptions> sections;
  RunOptions cur = base;
  bool open = false;
  std::string line;
  int line_no = 0;
  auto flush = [&] {
    if (open) sections.push_back(cur);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line == "[run]") {
      flush();
      cur = base;
      open = true;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) die("config line " + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!open) die("config line " + std::to_string(line_no) + ": key before [run]");
    try {
      if (key == "problem") cur.problem = value;
      else if (key == "m") cur.m = std::stoi(value);
      else if (key == "solver") cur.solver = value;
      else if (key == "eps") cur.eps = std::stod(value);
      else if (key == "lambda") cur.lambda = std::stod(value);
      else if (key == "alpha") cur.alpha = std::stod(value);
      else if (key == "lambda-init" || key == "lambda_init") cur.lambda_init = std::stod(value);
      else if (key == "lambda-bar" || key == "lambda_bar") cur.lambda_bar = std::stod(value);
      else if (key == "seed") { cur.seed = std::stoull(value); cur.seed_given = true; }
      else if (key == "repeats") cur.repeats = std::stoi(value);
      else if (key == "start") cur.start = value;
      else die("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    } catch (const std::exception&) {
      die("config line " + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
  }
  flush();
  if (sections.empty()) die("config file has no [run] sections");
  return sections;
}

void print_rows(vib_rows* rows, const std::string& out, const std::string& layout) {
  char* text = nullptr;
  if (out == "md") {
    check(vib_rows_markdown(rows, layout == "paper" ? 1 : 0, &text), "markdown");
  } else {
    check(vib_rows_csv(rows, &text), "csv");
  }
  std::fputs(text, stdout);
  vib_string_free(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vibench - projection-type solvers for monotone variational inequalities"};
  app.require_subcommand(1);

  RunOptions opt;
  auto* run = app.add_subcommand("run", "run one experiment (or a --config matrix)");
  run->add_option("--problem", opt.problem, "problem name p1..p5");
  run->add_option("--m", opt.m, "problem size (where adjustable)");
  run->add_option("--solver", opt.solver,
                  "PRG, PRG_ADAPT, PRG_SAFE, EGM, SUBEGM, TBFM or SUBPM");
  run->add_option("--eps", opt.eps, "termination tolerance");
  run->add_option("--lambda", opt.lambda, "constant stepsize (default 0.4/L when L is known)");
  run->add_option("--alpha", opt.alpha, "adaptive stepsize parameter");
  run->add_option("--lambda-init", opt.lambda_init, "initial trial stepsize");
  run->add_option("--lambda-bar", opt.lambda_bar, "stepsize cap");
  auto* seed_opt = run->add_option("--seed", opt.seed, "seed (default $VIBENCH_SEED or 0)");
  run->add_option("--repeats", opt.repeats, "repeat count");
  run->add_option("--start", opt.start, "start override: comma-separated floats or 'random'");
  run->add_option("--out", opt.out, "csv or md")->check(CLI::IsMember({"csv", "md"}));
  run->add_option("--layout", opt.layout, "md layout: generic or paper")
      ->check(CLI::IsMember({"generic", "paper"}));
  run->add_flag("--audit", opt.audit, "re-run with traces and audit descent inequalities");
  run->add_option("--config", opt.config_file, "key=value experiment matrix file");

  int table_id = 0;
  std::uint64_t table_seed = 0;
  bool table_seed_given = false;
  std::string table_out = "csv", table_layout = "generic";
  auto* table = app.add_subcommand("table", "run a built-in experiment suite");
  table->add_option("id", table_id, "suite id 1..5")->required();
  auto* tseed_opt = table->add_option("--seed", table_seed, "seed for generated instances/starts");
  table->add_option("--out", table_out, "csv or md")->check(CLI::IsMember({"csv", "md"}));
  table->add_option("--layout", table_layout, "md layout: generic or paper")
      ->check(CLI::IsMember({"generic", "paper"}));

  CLI11_PARSE(app, argc, argv);

  vib_rows* rows = nullptr;
  check(vib_rows_create(&rows), "rows");
  long audit_violations = 0;

  if (run->parsed()) {
    opt.seed_given = seed_opt->count() > 0;
    std::vector<RunOptions> sections;
    if (!opt.config_file.empty()) {
      sections = parse_config(opt.config_file, opt);
    } else {
      if (opt.problem.empty()) die("--problem is required (or use --config)");
      sections.push_back(opt);
    }
    for (RunOptions& section : sections) {
      if (section.problem.empty()) die("config section without a problem");
      Experiment exp{section, {}};
      vib_experiment e = exp.build();
      check(vib_run_experiment(&e, rows), "run");
      if (section.audit || opt.audit) {
        long checked = 0, violations = 0;
        check(vib_audit_experiment(&e, &checked, &violations), "audit");
        audit_violations += violations;
        std::fprintf(stderr, "audit %s/%s: %ld iterations checked, %ld violations\n",
                     section.problem.c_str(), section.solver.c_str(), checked, violations);
      }
    }
    print_rows(rows, opt.out, opt.layout);
  } else {
    if (tseed_opt->count() > 0) table_seed_given = true;
    std::uint64_t seed = table_seed_given ? table_seed : default_seed();
    check(vib_run_table(table_id, seed, rows), "table");
    print_rows(rows, table_out, table_layout);
  }

  long bad = vib_rows_nonconverged(rows);
  vib_rows_destroy(rows);
  if (audit_violations > 0) return 3;
  if (bad > 0) return 2;
  return 0;
}
