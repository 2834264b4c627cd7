#pragma once

#include "splitlab/bundle/rep.hpp"
#include "splitlab/report/report.hpp"

#include <functional>

namespace splitlab {

// Short representation tags used in check names: "m1s1", "h+1", "h0".
std::string rep_tag(const RepSpec& rep);
std::vector<RepSpec> configured_reps(const RunConfig& cfg);

SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

// Runs cfg.suites on up to cfg.workers threads; the report keeps the configured order.
Report run(const RunConfig& cfg, const std::function<void(const SuiteResult&)>& on_done = {});

// Exit status for a finished run: 0 all checks pass, 1 some check failed, 3 a suite crashed.
int exit_code(const Report& r);
inline constexpr int kExitFailures = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCrash = 3;

}  // namespace splitlab
