#include "splitlab/report/report.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

namespace splitlab {

namespace {

const char* compare_name(Compare c) {
  switch (c) {
    case Compare::AtMost: return "<=";
    case Compare::AtLeast: return ">=";
    case Compare::Equal: return "==";
    case Compare::Info: return "info";
  }
  return "?";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

std::optional<double> estimate_order(const std::vector<RungValue>& rungs, bool* all_exact, bool* non_monotone) {
  double sum = 0;
  int pairs = 0;
  bool exact = !rungs.empty();
  bool nm = false;
  for (const auto& r : rungs)
    if (r.value > kResidualFloor) exact = false;
  for (std::size_t i = 0; i + 1 < rungs.size(); ++i) {
    const double a = rungs[i].value, b = rungs[i + 1].value;
    if (a <= kResidualFloor && b <= kResidualFloor) continue;
    if (b > a) nm = true;
    const double refine = std::log2(static_cast<double>(rungs[i + 1].grid[1]) / rungs[i].grid[1]);
    sum += std::log2(a / std::max(b, 1e-300)) / refine;
    ++pairs;
  }
  if (all_exact) *all_exact = exact;
  if (non_monotone) *non_monotone = nm;
  if (pairs == 0) return std::nullopt;
  return sum / pairs;
}

void CheckRecord::finalize() {
  if (!rungs.empty()) {
    measured = rungs.back().value;
    if (compare == Compare::AtMost) order = estimate_order(rungs, &exact_on_all_rungs, &non_monotone);
  }
  bool ok = true;
  switch (compare) {
    case Compare::AtMost: ok = tolerance && measured <= *tolerance; break;
    case Compare::AtLeast: ok = tolerance && measured >= *tolerance; break;
    case Compare::Equal: ok = expected && std::abs(measured - *expected) <= tolerance.value_or(0.0); break;
    case Compare::Info: ok = true; break;
  }
  if (!std::isfinite(measured) && compare != Compare::Info) ok = false;
  if (order_required && !exact_on_all_rungs && !(order && *order >= 2.0)) ok = false;
  pass = ok;
}

int Report::checks() const {
  int n = 0;
  for (const auto& s : suites)
    for (const auto& c : s.records)
      if (c.compare != Compare::Info) ++n;
  return n;
}

int Report::failures() const {
  int n = 0;
  for (const auto& s : suites)
    for (const auto& c : s.records)
      if (!c.pass) ++n;
  return n;
}

bool Report::crashed() const {
  for (const auto& s : suites)
    if (!s.error.empty()) return true;
  return false;
}

std::string report_json(const Report& r, bool normalize) {
  using json = nlohmann::ordered_json;
  const RunConfig& c = r.config;
  json j;
  j["schema"] = "splitlab-report";
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kToolVersion;

  json cfg;
  cfg["suites"] = c.suites;
  json ladder = json::array();
  for (const auto& g : c.ladder) ladder.push_back({g[0], g[1], g[2]});
  cfg["ladder"] = ladder;
  cfg["r_min"] = c.r_min;
  cfg["r_max"] = c.r_max;
  json massive = json::array();
  for (const auto& [m, s] : c.massive) massive.push_back({{"mass", m}, {"spin", s}});
  cfg["massive"] = massive;
  cfg["massless"] = c.massless;
  cfg["seed"] = c.seed;
  cfg["test_profile"] = c.test_profile;
  json tol = json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  cfg["tolerances"] = tol;
  cfg["chern"] = {{"radius", c.chern_radius}, {"substeps", c.chern_substeps}, {"branch_margin", c.chern_branch_margin}};
  cfg["holonomy"] = {{"areas", c.loop_areas}, {"center", c.loop_center}, {"vertices", c.loop_vertices}, {"radius", c.loop_radius}};
  cfg["affine_lambdas"] = c.lambdas;
  cfg["degeneracy_frames"] = c.frames;
  cfg["parser"] = {{"fuzz_cases", c.fuzz_cases}, {"fuzz_seed", c.fuzz_seed}};
  json profiles = json::object();
  for (const auto& [name, t] : c.profiles) profiles[name] = {{"r", t.r}, {"f", t.f}};
  cfg["profiles"] = profiles;
  if (!normalize) cfg["workers"] = c.workers;
  j["config"] = cfg;

  json suites = json::array();
  for (const auto& s : r.suites) {
    json js;
    js["name"] = s.name;
    if (!s.error.empty()) js["error"] = s.error;
    json recs = json::array();
    for (const auto& rec : s.records) {
      json jr;
      jr["name"] = rec.name;
      jr["anchor"] = rec.anchor;
      jr["description"] = rec.description;
      jr["compare"] = compare_name(rec.compare);
      jr["measured"] = rec.measured;
      jr["expected"] = rec.expected ? json(*rec.expected) : json(nullptr);
      jr["tolerance"] = rec.tolerance ? json(*rec.tolerance) : json(nullptr);
      jr["pass"] = rec.pass;
      if (!rec.rungs.empty()) {
        json rs = json::array();
        for (const auto& rv : rec.rungs) rs.push_back({{"grid", {rv.grid[0], rv.grid[1], rv.grid[2]}}, {"value", rv.value}});
        jr["rungs"] = rs;
        jr["order"] = rec.order ? json(*rec.order) : json(nullptr);
        jr["order_required"] = rec.order_required;
        jr["exact_on_all_rungs"] = rec.exact_on_all_rungs;
        jr["non_monotone"] = rec.non_monotone;
      }
      if (!rec.note.empty()) jr["note"] = rec.note;
      recs.push_back(jr);
    }
    js["records"] = recs;
    if (!normalize) js["seconds"] = s.seconds;
    suites.push_back(js);
  }
  j["suites"] = suites;
  j["summary"] = {{"checks", r.checks()}, {"failures", r.failures()}, {"crashed", r.crashed()}};
  if (!normalize) j["seconds"] = r.seconds;
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& s : r.suites)
    for (const auto& rec : s.records) {
      const std::string order = rec.order ? num(*rec.order) : "";
      const std::string tol = rec.tolerance ? num(*rec.tolerance) : "";
      auto row = [&](int rung, const GridDims& g, double v) {
        out << s.name << "," << quote(rec.name) << "," << quote(rec.anchor) << "," << rung << "," << g[0] << "," << g[1]
            << "," << g[2] << "," << num(v) << "," << order << "," << tol << "," << (rec.pass ? "true" : "false") << "\n";
      };
      if (rec.rungs.empty())
        row(-1, {0, 0, 0}, rec.measured);
      else
        for (std::size_t i = 0; i < rec.rungs.size(); ++i) row(static_cast<int>(i), rec.rungs[i].grid, rec.rungs[i].value);
    }
  return out.str();
}

}  // namespace splitlab
