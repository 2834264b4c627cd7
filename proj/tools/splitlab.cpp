#include "splitlab/algebra/scalar.hpp"
#include "splitlab/lang/format.hpp"
#include "splitlab/lang/lower.hpp"
#include "splitlab/lang/parser.hpp"
#include "splitlab/report/config.hpp"
#include "splitlab/report/suites.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace splitlab;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> suites;
  std::optional<double> mass;
  std::optional<int> spin;
  std::optional<int> helicity;
  std::string grid;
  std::optional<std::uint64_t> seed;
  std::string json, csv;
  std::optional<int> workers;
  bool normalize = false;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool with_suites) {
  app->add_option("--config", c.config, "configuration file");
  if (with_suites) app->add_option("--suite", c.suites, "suites to run (or 'all')");
  app->add_option("--mass", c.mass, "mass of the massive representation");
  app->add_option("--spin", c.spin, "spin of the massive representation");
  app->add_option("--helicity", c.helicity, "helicity of the massless representation");
  app->add_option("--grid", c.grid, "reference grid NR,NT,NP");
  app->add_option("--seed", c.seed, "test-section seed");
  app->add_option("--json", c.json, "write the JSON report here");
  app->add_option("--csv", c.csv, "write the convergence CSV here");
  app->add_option("--workers", c.workers, "suite worker threads (0: automatic)");
  app->add_flag("--normalize", c.normalize, "omit timings and worker count from the JSON report");
  app->add_flag("-q,--quiet", c.quiet, "only print the summary line");
}

GridDims parse_grid(const std::string& s) {
  GridDims d{0, 0, 0};
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> d[0] >> c1 >> d[1] >> c2 >> d[2]) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
    throw CLI::ValidationError("--grid", "expected NR,NT,NP, got '" + s + "'");
  return d;
}

// Builds the run configuration: file (if any), then command-line overrides.
RunConfig build_config(const Common& c, const std::vector<std::string>& default_suites, bool single_rung) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (!c.suites.empty()) {
    try {
      cfg.suites = expand_suites(c.suites);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--suite", 0, 0, e.what());
    }
  } else if (c.config.empty() || single_rung || (cfg.suites.empty() && !default_suites.empty())) {
    // chern and holonomy always run their own suite; a config without suites keeps the validation error for run
    cfg.suites = expand_suites(default_suites.empty() ? std::vector<std::string>{"all"} : default_suites);
  }
  if (c.mass || c.spin || c.helicity) {
    cfg.massive.clear();
    cfg.massless.clear();
    if (c.mass || c.spin) cfg.massive.emplace_back(c.mass.value_or(1.0), c.spin.value_or(0));
    if (c.helicity) cfg.massless.push_back(*c.helicity);
  }
  if (!c.grid.empty()) {
    const GridDims g = parse_grid(c.grid);
    if (single_rung) {
      cfg.ladder = {g};
    } else {
      std::vector<GridDims> kept;
      for (const auto& r : cfg.ladder)
        if (r[0] <= g[0] && r[1] < g[1] && r[2] < g[2]) kept.push_back(r);
      kept.push_back(g);
      cfg.ladder = kept;
    }
  } else if (single_rung) {
    cfg.ladder = {cfg.ladder.back()};
  }
  if (c.seed) cfg.seed = *c.seed;
  if (!c.json.empty()) cfg.json_path = c.json;
  if (!c.csv.empty()) cfg.csv_path = c.csv;
  if (c.workers) cfg.workers = *c.workers;
  if (c.normalize) cfg.normalize = true;
  cfg.validate();
  return cfg;
}

std::string value_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void print_record(const CheckRecord& r) {
  const char* tag = r.compare == Compare::Info ? "info" : (r.pass ? "PASS" : "FAIL");
  std::string bound;
  switch (r.compare) {
    case Compare::AtMost: bound = "<= " + value_text(r.tolerance.value_or(0)); break;
    case Compare::AtLeast: bound = ">= " + value_text(r.tolerance.value_or(0)); break;
    case Compare::Equal: bound = "== " + value_text(r.expected.value_or(0)); break;
    case Compare::Info: break;
  }
  std::printf("  %-4s %-52s %12s %-14s", tag, r.name.c_str(), value_text(r.measured).c_str(), bound.c_str());
  if (r.order) std::printf(" order %5.2f", *r.order);
  std::printf("\n");
  if (!r.pass && !r.note.empty()) std::printf("       note: %s\n", r.note.c_str());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int execute(const RunConfig& cfg, bool quiet, bool csv_to_stdout) {
  const Report rep = run(cfg, [&](const SuiteResult& s) {
    if (quiet || csv_to_stdout) return;
    std::printf("[%s] %s\n", s.name.c_str(), s.error.empty() ? "" : ("CRASHED: " + s.error).c_str());
    for (const auto& r : s.records) print_record(r);
    std::fflush(stdout);
  });
  if (!cfg.json_path.empty()) write_file(cfg.json_path, report_json(rep, cfg.normalize));
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, report_csv(rep));
  if (csv_to_stdout) std::fputs(report_csv(rep).c_str(), stdout);
  const int code = exit_code(rep);
  std::fprintf(csv_to_stdout ? stderr : stdout, "%d checks, %d failed%s%s\n", rep.checks(), rep.failures(),
               rep.crashed() ? ", a suite crashed" : "", cfg.normalize ? "" : (" (" + value_text(rep.seconds) + " s)").c_str());
  return code;
}

int eval_expression(const std::string& expr, const std::string& mode, bool check_zero) {
  const RingRef ring = mode == "massless" ? massless_ring() : massive_ring();
  const auto value = lang::lower(lang::parse(expr), ring);
  bool zero = false;
  if (const auto* s = std::get_if<OperatorExpr>(&value)) {
    std::cout << lang::format(*s) << "\n";
    zero = s->is_zero();
  } else {
    const auto& v = std::get<VectorExpr>(value);
    std::cout << lang::format(v) << "\n";
    zero = v.is_zero();
  }
  if (!check_zero) return 0;
  std::cout << (zero ? "pass" : "fail") << "\n";
  return zero ? 0 : kExitFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitlab: spin/orbital splitting laboratory for Poincare particle bundles"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  Common run_opt, conv_opt, chern_opt, hol_opt;
  auto* run_cmd = app.add_subcommand("run", "run check suites and write reports");
  add_common(run_cmd, run_opt, true);
  auto* conv_cmd = app.add_subcommand("convergence", "ladder study; CSV to --csv or stdout");
  add_common(conv_cmd, conv_opt, true);
  auto* chern_cmd = app.add_subcommand("chern", "lattice Chern numbers of the massless bundles");
  add_common(chern_cmd, chern_opt, false);
  auto* hol_cmd = app.add_subcommand("holonomy", "holonomy around small loops");
  add_common(hol_cmd, hol_opt, false);
  std::vector<double> areas;
  hol_cmd->add_option("--area", areas, "loop solid angles");

  std::string expr, mode = "massive";
  bool check_zero = false;
  auto* eval_cmd = app.add_subcommand("eval", "normal form of an operator-language expression");
  eval_cmd->add_option("expr", expr, "expression")->required();
  eval_cmd->add_option("--mode", mode, "coefficient ring")->check(CLI::IsMember({"massive", "massless"}));
  eval_cmd->add_flag("--check-zero", check_zero, "exit 0 iff the expression normal-forms to 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), kExitUsage);
  }

  try {
    if (eval_cmd->parsed()) return eval_expression(expr, mode, check_zero);
    if (run_cmd->parsed()) return execute(build_config(run_opt, {}, false), run_opt.quiet, false);
    if (conv_cmd->parsed()) {
      RunConfig cfg = build_config(conv_opt, {"algebra", "curvature", "flatness"}, false);
      if (cfg.ladder.size() < 2) throw ConfigError("convergence", 0, 0, "a convergence study needs at least two rungs");
      return execute(cfg, conv_opt.quiet, cfg.csv_path.empty());
    }
    if (chern_cmd->parsed()) return execute(build_config(chern_opt, {"chern"}, true), chern_opt.quiet, false);
    if (hol_cmd->parsed()) {
      RunConfig cfg = build_config(hol_opt, {"holonomy"}, true);
      if (!areas.empty()) cfg.loop_areas = areas;
      cfg.validate();
      return execute(cfg, hol_opt.quiet, false);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    // Operator-language errors carry their own location and kind.
    std::fprintf(stderr, "error: %s\n", e.what());
    return eval_cmd->parsed() ? kExitUsage : kExitCrash;
  }
  return kExitUsage;
}
