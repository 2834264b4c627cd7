#include <doctest.h>

#include "splitlab/report/suites.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace splitlab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

CheckRecord ladder_record(std::vector<double> values) {
  CheckRecord r;
  r.name = "x";
  r.compare = Compare::AtMost;
  r.tolerance = 1e-3;
  r.order_required = true;
  const std::vector<GridDims> dims{{4, 12, 24}, {6, 24, 48}, {8, 48, 96}};
  for (std::size_t i = 0; i < values.size(); ++i) r.rungs.push_back({dims[i], values[i]});
  r.finalize();
  return r;
}

}  // namespace

TEST_CASE("config parses every section") {
  const RunConfig cfg = parse_config(R"(# sample
[run]
suites = chern, holonomy
seed = 11
workers = 2
[grid]
ladder = 4,12,24; 8,48,96
r_min = 0.8
[reps]
massive = 1:0, 2:1
massless = 1
[holonomy]
areas = 0.02
[tolerance]
curvature = 1e-4
curvature.m1s1.boost = 1e-5
[profile ramp]
r = 0.5, 1, 1.5, 2
f = 0, 0.3, 0.6, 0.9
)",
                                     "cfg");
  CHECK(cfg.suites == std::vector<std::string>{"chern", "holonomy"});
  CHECK(cfg.seed == 11);
  CHECK(cfg.workers == 2);
  CHECK(cfg.ladder.size() == 2);
  CHECK(cfg.r_min == 0.8);
  REQUIRE(cfg.massive.size() == 2);
  CHECK(cfg.massive[1] == std::pair<double, int>{2.0, 1});
  CHECK(cfg.massless == std::vector<int>{1});
  CHECK(cfg.loop_areas == std::vector<double>{0.02});
  CHECK(cfg.profiles.at("ramp").f.size() == 4);
  CHECK(cfg.tolerance("curvature.m1s1.boost", 1) == 1e-5);
  CHECK(cfg.tolerance("curvature.m1s1.rotation", 1) == 1e-4);
  CHECK(cfg.tolerance("curvaturex", 1) == 1);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config errors carry source, line and column") {
  CHECK(error_of("[run]\nbogus = 1\n") == "cfg:2:1: unknown key 'bogus' in [run]");
  CHECK(error_of("[nowhere]\n").find("cfg:1:2: unknown section") == 0);
  CHECK(error_of("[run]\nseed = abc\n").find("cfg:2:8:") == 0);
  CHECK(error_of("[run]\nsuites = chern, nope\n").find("unknown suite 'nope'") != std::string::npos);
  CHECK(error_of("[run]\nsuites =\n").find("no suites selected") != std::string::npos);
  CHECK(error_of("seed = 1\n").find("outside any section") != std::string::npos);
  CHECK(error_of("[grid]\nladder = 4,12\n").find("cfg:2:") == 0);
  CHECK(error_of("[profile p]\nr = 1,2\nf = 1,2\n").find("needs r and f lists") != std::string::npos);
}

TEST_CASE("validation rejects inconsistent configurations") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // no suites
  cfg.suites = {"algebra"};
  cfg.ladder = {{8, 48, 96}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // convergence needs two rungs
  cfg.ladder = {{8, 48, 96}, {6, 24, 48}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // not increasing
  cfg.suites = {"chern"};
  cfg.ladder = {{8, 48, 96}};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("suite names expand and reject unknown names") {
  CHECK(expand_suites({"all"}).size() == known_suites().size());
  CHECK(expand_suites({"chern", "chern", "parser"}) == std::vector<std::string>{"chern", "parser"});
  CHECK_THROWS_AS(expand_suites({"nope"}), std::invalid_argument);
}

TEST_CASE("convergence order and pass rule") {
  const CheckRecord good = ladder_record({1e-2, 1e-4, 1e-6});  // factor 100 per doubling
  REQUIRE(good.order);
  CHECK(*good.order == doctest::Approx(std::log2(100.0)));
  CHECK(good.pass);

  const CheckRecord slow = ladder_record({1e-4, 6e-5, 4e-5});  // below tolerance but order < 2
  CHECK_FALSE(slow.pass);

  const CheckRecord exact = ladder_record({0, 1e-14, 0});
  CHECK(exact.exact_on_all_rungs);
  CHECK(exact.pass);

  const CheckRecord bumpy = ladder_record({1e-2, 1e-8, 1e-7});
  CHECK(bumpy.non_monotone);

  CheckRecord nan = ladder_record({1e-2, 1e-4, NAN});
  CHECK_FALSE(nan.pass);
}

TEST_CASE("report JSON is deterministic and CSV columns are fixed") {
  RunConfig cfg;
  cfg.suites = {"holonomy", "chern"};
  cfg.ladder = {{6, 24, 48}};
  cfg.workers = 2;
  const Report a = run(cfg);
  cfg.workers = 1;
  const Report b = run(cfg);
  CHECK(report_json(a, true) == report_json(b, true));
  CHECK(exit_code(a) == 0);

  const auto j = nlohmann::json::parse(report_json(a, false));
  CHECK(j["schema_version"] == kReportSchemaVersion);
  CHECK(j.contains("seconds"));
  CHECK(j["suites"][0]["name"] == "holonomy");
  for (const auto& s : j["suites"])
    for (const auto& r : s["records"]) CHECK_FALSE(r["anchor"].get<std::string>().empty());

  std::istringstream csv(report_csv(a));
  std::string header, row;
  std::getline(csv, header);
  CHECK(header == kCsvHeader);
  std::getline(csv, row);
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}

TEST_CASE("exit codes distinguish failure from crash") {
  Report r;
  r.suites.push_back({"x", {}, "", 0});
  CheckRecord ok;
  ok.pass = true;
  r.suites[0].records.push_back(ok);
  CHECK(exit_code(r) == 0);
  CheckRecord bad;
  bad.pass = false;
  r.suites[0].records.push_back(bad);
  CHECK(exit_code(r) == kExitFailures);
  r.suites.push_back(run_suite("no-such-suite", RunConfig{}));
  CHECK_FALSE(r.suites.back().error.empty());
  CHECK(exit_code(r) == kExitCrash);
}

TEST_CASE("a profile table that misses the shell yields a failing record, not a crash") {
  RunConfig cfg = parse_config("[run]\nsuites = curvature\n[reps]\nmassive = 1:1\nmassless =\n"
                               "[grid]\nladder = 4,12,24; 6,24,48\n"
                               "[profile narrow]\nr = 2, 3, 4, 5\nf = 0, 0.1, 0.2, 0.3\n",
                               "cfg");
  const SuiteResult s = run_suite("curvature", cfg);
  CHECK(s.error.empty());
  bool found = false;
  for (const auto& r : s.records)
    if (r.name == "curvature.m1s1.profile.narrow") {
      found = true;
      CHECK_FALSE(r.pass);
      CHECK(r.note.find("outside the profile table") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("representation tags") {
  CHECK(rep_tag(RepSpec::massive(1, 1)) == "m1s1");
  CHECK(rep_tag(RepSpec::massive(0.5, 0)) == "m0.5s0");
  CHECK(rep_tag(RepSpec::massless(-1)) == "h-1");
  CHECK(rep_tag(RepSpec::massless(0)) == "h0");
}
