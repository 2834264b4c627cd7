// Acceptance run: one line per criterion, exit 0 iff every criterion passes.
#include "splitlab/report/suites.hpp"

#include <cstdio>
#include <string>
#include <vector>

using namespace splitlab;

namespace {

struct Criterion {
  int id;
  std::string suite;
  std::string text;
  double time_limit;  // seconds, 0: none stated
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "symbolic", "symbolic identities normal-form to exactly 0", 10},
      {2, "algebra", "numerical Poincare algebra <= 1e-3 at (8,48,96), order >= 2", 180},
      {3, "chern", "Chern number -2h within 0.05, identical across connections", 60},
      {4, "curvature", "F_K, F_R and cross-commutator closed forms <= 1e-3, order >= 2", 0},
      {5, "flatness", "flat so3 <= 1e-3; curved so3 matches curvature; J_perp commutator", 0},
      {6, "newton-wigner", "i D^+ matches the closed Newton-Wigner form; Q = i grad in the frame, <= 1e-6", 0},
      {7, "degeneracy", "D^K = D^R at m = 0 (<= 1e-6); stable positive gap for m > 0", 0},
      {8, "affine", "curvature norm minimized at lambda = 1; F^f prediction within 1%", 0},
      {9, "holonomy", "Wigner angle within 1%; D^+ holonomy defect <= 1e-8", 0},
      {10, "parser", "catalog round trip 100%; 1e5 fuzz cases give structured errors only", 0},
  };

  RunConfig cfg;
  cfg.suites = expand_suites({"all"});
  cfg.validate();
  double total = 0;
  int failed = 0;
  for (const auto& c : criteria) {
    const SuiteResult r = run_suite(c.suite, cfg);
    total += r.seconds;
    int checks = 0, bad = 0;
    std::string first;
    for (const auto& rec : r.records) {
      if (rec.compare == Compare::Info) continue;
      ++checks;
      if (!rec.pass) {
        ++bad;
        if (first.empty()) first = rec.name;
      }
    }
    const bool timed_out = c.time_limit > 0 && r.seconds > c.time_limit;
    const bool ok = r.error.empty() && checks > 0 && bad == 0 && !timed_out;
    if (!ok) ++failed;
    std::printf("criterion %2d %s  %-84s %3d/%3d checks  %7.2f s", c.id, ok ? "PASS" : "FAIL", c.text.c_str(),
                checks - bad, checks, r.seconds);
    if (c.time_limit > 0) std::printf(" (limit %.0f s)", c.time_limit);
    if (!r.error.empty()) std::printf("  crashed: %s", r.error.c_str());
    if (!first.empty()) std::printf("  first failure: %s", first.c_str());
    if (timed_out) std::printf("  over time limit");
    std::printf("\n");
  }
  std::printf("acceptance: %d/%zu criteria pass, %.1f s total\n", static_cast<int>(criteria.size()) - failed,
              criteria.size(), total);
  return failed == 0 ? 0 : 1;
}
