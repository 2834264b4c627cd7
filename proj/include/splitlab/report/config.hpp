#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitlab {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& source, int line, int column, const std::string& msg);
  std::string source;
  int line = 0;
  int column = 0;
};

using GridDims = std::array<int, 3>;

struct ProfileTable {
  std::vector<double> r, f;
};

struct RunConfig {
  std::vector<std::string> suites;
  std::vector<GridDims> ladder{{4, 12, 24}, {6, 24, 48}, {8, 48, 96}};
  double r_min = 0.9;
  double r_max = 1.1;
  std::vector<std::pair<double, int>> massive{{1.0, 0}, {1.0, 1}};  // (mass, spin)
  std::vector<int> massless{-1, 0, 1};
  std::uint64_t seed = 7;
  int workers = 0;  // 0: hardware concurrency (at most 8)
  bool normalize = false;
  std::string test_profile = "gaussian-bump";
  std::map<std::string, double> tolerances;  // check name or dotted prefix -> tolerance

  // chern
  double chern_radius = 1.0;
  int chern_substeps = 4;
  double chern_branch_margin = 0.5;
  // holonomy
  std::vector<double> loop_areas{0.01, 0.05};
  std::array<double, 3> loop_center{0.36, -0.48, 0.8};
  int loop_vertices = 64;
  double loop_radius = 1.0;
  // affine
  std::vector<double> lambdas{0.5, 0.9, 1.0, 1.1, 2.0};
  // degeneracy
  int frames = 10;
  // parser
  int fuzz_cases = 100000;
  std::uint64_t fuzz_seed = 20240611;
  // outputs
  std::string json_path;
  std::string csv_path;
  std::string sections_dir;  // binary test sections + sidecars, optional

  std::map<std::string, ProfileTable> profiles;  // [profile NAME]

  void validate() const;  // throws ConfigError with line 0
  // Tolerance for a check: the longest configured key equal to the name or a dotted prefix of it.
  double tolerance(const std::string& check, double fallback) const;
};

// Line-oriented format:
//   # comment            ; comment
//   [section]            [profile NAME]
//   key = value          (lists are comma separated; ladder rungs are separated by ';')
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

const std::vector<std::string>& known_suites();
// "all" expands to every suite; duplicates are dropped, order kept. Unknown names: std::invalid_argument.
std::vector<std::string> expand_suites(const std::vector<std::string>& names);

}  // namespace splitlab
