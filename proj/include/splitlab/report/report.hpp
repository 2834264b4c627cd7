#pragma once

#include "splitlab/report/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace splitlab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;
// Relative residuals at or below this are treated as exact when estimating orders.
inline constexpr double kResidualFloor = 1e-10;

struct RungValue {
  GridDims grid{0, 0, 0};
  double value = 0;
};

enum class Compare { AtMost, AtLeast, Equal, Info };

struct CheckRecord {
  std::string name;    // e.g. "algebra.m1s1.KK"
  std::string anchor;  // source label or "plumbing"
  std::string description;
  Compare compare = Compare::AtMost;
  double measured = 0;
  std::optional<double> expected;   // Equal
  std::optional<double> tolerance;  // AtMost / AtLeast bound, Equal allowed deviation
  std::vector<RungValue> rungs;     // convergence data; last rung is the reference grid
  std::optional<double> order;      // mean log2 ratio per angular doubling
  bool order_required = false;      // needs order >= 2
  bool exact_on_all_rungs = false;  // every rung at the floor
  bool non_monotone = false;
  bool pass = true;
  std::string note;

  // Recomputes order, flags and pass from the fields above.
  void finalize();
};

struct SuiteResult {
  std::string name;
  std::vector<CheckRecord> records;
  std::string error;  // non-empty when the suite threw
  double seconds = 0;
};

struct Report {
  RunConfig config;
  std::vector<SuiteResult> suites;
  double seconds = 0;

  int checks() const;
  int failures() const;
  bool crashed() const;
};

// Mean of log2(e_i / e_{i+1}) / log2(nt_{i+1} / nt_i) over pairs not both at the floor.
std::optional<double> estimate_order(const std::vector<RungValue>& rungs, bool* all_exact, bool* non_monotone);

std::string report_json(const Report& r, bool normalize);
// Columns: suite,check,anchor,rung,n_r,n_theta,n_phi,residual,order,tolerance,pass
std::string report_csv(const Report& r);
inline constexpr const char* kCsvHeader = "suite,check,anchor,rung,n_r,n_theta,n_phi,residual,order,tolerance,pass";

}  // namespace splitlab
