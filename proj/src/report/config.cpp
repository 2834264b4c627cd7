#include "splitlab/report/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace splitlab {

namespace {

std::string where(const std::string& source, int line, int column) {
  if (line <= 0) return source;
  return source + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

struct Cursor {
  const std::string& source;
  int line;
  int column;  // column of the value
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source, line, column, msg); }
};

double to_double(const Cursor& at, const std::string& s) {
  double v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) at.fail("expected a number, got '" + s + "'");
  return v;
}

long long to_int(const Cursor& at, const std::string& s) {
  long long v = 0;
  const char* b = s.data();
  if (!s.empty() && s[0] == '+') ++b;
  const auto r = std::from_chars(b, s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) at.fail("expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const Cursor& at, const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  at.fail("expected true or false, got '" + s + "'");
}

std::vector<double> to_doubles(const Cursor& at, const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(to_double(at, p));
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& src, int ln, int col, const std::string& msg)
    : std::runtime_error(where(src, ln, col) + ": " + msg), source(src), line(ln), column(col) {}

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"symbolic",  "algebra",    "chern",   "curvature", "flatness",
                                          "newton-wigner", "degeneracy", "affine", "holonomy", "parser"};
  return s;
}

std::vector<std::string> expand_suites(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& k : known_suites()) add(k);
    } else {
      if (std::find(known_suites().begin(), known_suites().end(), n) == known_suites().end())
        throw std::invalid_argument("unknown suite '" + n + "'");
      add(n);
    }
  }
  return out;
}

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw ConfigError("config", 0, 0, m); };
  if (suites.empty()) bad("no suites selected");
  if (ladder.empty()) bad("grid ladder is empty");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    for (int d = 0; d < 3; ++d)
      if (ladder[i][d] <= ladder[i - 1][d]) bad("grid ladder must be strictly increasing in every dimension");
  const bool needs_convergence = std::any_of(suites.begin(), suites.end(), [](const std::string& s) {
    return s == "algebra" || s == "curvature" || s == "flatness" || s == "degeneracy";
  });
  if (needs_convergence && ladder.size() < 2) bad("convergence suites need at least two ladder rungs");
  for (const auto& g : ladder) {
    if (g[0] < 4 || g[1] < 4 || g[2] < 4) bad("grid dimensions must be at least 4");
    if (g[2] % 2) bad("n_phi must be even");
  }
  if (!(r_min > 0) || !(r_max > r_min)) bad("need 0 < r_min < r_max");
  for (const auto& [m, s] : massive)
    if (!(m > 0) || s < 0 || s > 4) bad("massive representations need m > 0 and 0 <= s <= 4");
  for (int h : massless)
    if (h < -1 || h > 1) bad("massless helicities are limited to -1, 0, 1");
  if (workers < 0) bad("workers must be >= 0");
  if (frames < 1) bad("degeneracy frames must be >= 1");
  if (fuzz_cases < 0) bad("fuzz cases must be >= 0");
  if (loop_vertices < 3) bad("loops need at least 3 vertices");
  for (double a : loop_areas)
    if (!(a > 0) || a >= 6.28) bad("loop areas must be in (0, 2 pi)");
  if (test_profile != "gaussian-bump" && test_profile != "multi-bump") bad("unknown test profile '" + test_profile + "'");
}

double RunConfig::tolerance(const std::string& check, double fallback) const {
  std::size_t best = 0;
  double value = fallback;
  for (const auto& [key, tol] : tolerances) {
    const bool match = check == key || (check.size() > key.size() && check.compare(0, key.size(), key) == 0 &&
                                        check[key.size()] == '.');
    if (match && key.size() >= best) {
      best = key.size();
      value = tol;
    }
  }
  return value;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  std::string profile_name;
  std::map<std::string, int> profile_line;

  using Setter = std::function<void(const Cursor&, const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> keys{
      {"run",
       {{"suites", [&](const Cursor& at, const std::string& v) {
           std::vector<std::string> names;
           for (const auto& n : split(v, ','))
             if (!n.empty()) names.push_back(n);
           if (names.empty()) at.fail("no suites selected");
           try {
             cfg.suites = expand_suites(names);
           } catch (const std::invalid_argument& e) {
             at.fail(e.what());
           }
         }},
        {"seed", [&](const Cursor& at, const std::string& v) { cfg.seed = static_cast<std::uint64_t>(to_int(at, v)); }},
        {"workers", [&](const Cursor& at, const std::string& v) { cfg.workers = static_cast<int>(to_int(at, v)); }},
        {"normalize", [&](const Cursor& at, const std::string& v) { cfg.normalize = to_bool(at, v); }},
        {"test_profile", [&](const Cursor&, const std::string& v) { cfg.test_profile = v; }}}},
      {"grid",
       {{"ladder", [&](const Cursor& at, const std::string& v) {
           cfg.ladder.clear();
           for (const auto& rung : split(v, ';')) {
             const auto p = split(rung, ',');
             if (p.size() != 3) at.fail("ladder rung '" + rung + "' must be n_r, n_theta, n_phi");
             cfg.ladder.push_back({static_cast<int>(to_int(at, p[0])), static_cast<int>(to_int(at, p[1])),
                                   static_cast<int>(to_int(at, p[2]))});
           }
         }},
        {"r_min", [&](const Cursor& at, const std::string& v) { cfg.r_min = to_double(at, v); }},
        {"r_max", [&](const Cursor& at, const std::string& v) { cfg.r_max = to_double(at, v); }}}},
      {"reps",
       {{"massive", [&](const Cursor& at, const std::string& v) {
           cfg.massive.clear();
           if (v.empty()) return;
           for (const auto& p : split(v, ',')) {
             const auto ms = split(p, ':');
             if (ms.size() != 2) at.fail("massive representation '" + p + "' must be mass:spin");
             cfg.massive.emplace_back(to_double(at, ms[0]), static_cast<int>(to_int(at, ms[1])));
           }
         }},
        {"massless", [&](const Cursor& at, const std::string& v) {
           cfg.massless.clear();
           if (v.empty()) return;
           for (const auto& p : split(v, ',')) cfg.massless.push_back(static_cast<int>(to_int(at, p)));
         }}}},
      {"chern",
       {{"radius", [&](const Cursor& at, const std::string& v) { cfg.chern_radius = to_double(at, v); }},
        {"substeps", [&](const Cursor& at, const std::string& v) { cfg.chern_substeps = static_cast<int>(to_int(at, v)); }},
        {"branch_margin", [&](const Cursor& at, const std::string& v) { cfg.chern_branch_margin = to_double(at, v); }}}},
      {"holonomy",
       {{"areas", [&](const Cursor& at, const std::string& v) { cfg.loop_areas = to_doubles(at, v); }},
        {"center", [&](const Cursor& at, const std::string& v) {
           const auto c = to_doubles(at, v);
           if (c.size() != 3) at.fail("center needs three components");
           cfg.loop_center = {c[0], c[1], c[2]};
         }},
        {"vertices", [&](const Cursor& at, const std::string& v) { cfg.loop_vertices = static_cast<int>(to_int(at, v)); }},
        {"radius", [&](const Cursor& at, const std::string& v) { cfg.loop_radius = to_double(at, v); }}}},
      {"affine", {{"lambdas", [&](const Cursor& at, const std::string& v) { cfg.lambdas = to_doubles(at, v); }}}},
      {"degeneracy", {{"frames", [&](const Cursor& at, const std::string& v) { cfg.frames = static_cast<int>(to_int(at, v)); }}}},
      {"parser",
       {{"fuzz_cases", [&](const Cursor& at, const std::string& v) { cfg.fuzz_cases = static_cast<int>(to_int(at, v)); }},
        {"fuzz_seed", [&](const Cursor& at, const std::string& v) { cfg.fuzz_seed = static_cast<std::uint64_t>(to_int(at, v)); }}}},
      {"output",
       {{"json", [&](const Cursor&, const std::string& v) { cfg.json_path = v; }},
        {"csv", [&](const Cursor&, const std::string& v) { cfg.csv_path = v; }},
        {"sections", [&](const Cursor&, const std::string& v) { cfg.sections_dir = v; }}}},
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#' || raw[first] == ';') continue;
    const int col0 = static_cast<int>(first) + 1;
    if (raw[first] == '[') {
      const auto close = raw.find(']', first);
      if (close == std::string::npos) throw ConfigError(source, line_no, col0, "unterminated section header");
      if (!trim(raw.substr(close + 1)).empty() && trim(raw.substr(close + 1))[0] != '#')
        throw ConfigError(source, line_no, static_cast<int>(close) + 2, "unexpected text after section header");
      section = trim(raw.substr(first + 1, close - first - 1));
      profile_name.clear();
      if (section.rfind("profile ", 0) == 0) {
        profile_name = trim(section.substr(8));
        if (profile_name.empty()) throw ConfigError(source, line_no, col0, "profile section needs a name");
        if (cfg.profiles.count(profile_name)) throw ConfigError(source, line_no, col0, "duplicate profile '" + profile_name + "'");
        cfg.profiles[profile_name];
        profile_line[profile_name] = line_no;
      } else if (section != "tolerance" && !keys.count(section)) {
        throw ConfigError(source, line_no, col0 + 1, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = raw.find('=', first);
    if (eq == std::string::npos) throw ConfigError(source, line_no, col0, "expected 'key = value'");
    const std::string key = trim(raw.substr(first, eq - first));
    std::string value = raw.substr(eq + 1);
    if (const auto hash = value.find(" #"); hash != std::string::npos) value = value.substr(0, hash);
    const int vcol = static_cast<int>(raw.find_first_not_of(" \t", eq + 1) == std::string::npos
                                          ? eq + 2
                                          : raw.find_first_not_of(" \t", eq + 1) + 1);
    value = trim(value);
    const Cursor at{source, line_no, vcol};
    if (section.empty()) throw ConfigError(source, line_no, col0, "key '" + key + "' outside any section");
    if (section == "tolerance") {
      cfg.tolerances[key] = to_double(at, value);
      if (!(cfg.tolerances[key] >= 0)) at.fail("tolerance must be >= 0");
      continue;
    }
    if (!profile_name.empty()) {
      auto& t = cfg.profiles[profile_name];
      if (key == "r")
        t.r = to_doubles(at, value);
      else if (key == "f")
        t.f = to_doubles(at, value);
      else
        throw ConfigError(source, line_no, col0, "unknown key '" + key + "' in [profile " + profile_name + "]");
      continue;
    }
    const auto& sec = keys.at(section);
    const auto it = sec.find(key);
    if (it == sec.end()) throw ConfigError(source, line_no, col0, "unknown key '" + key + "' in [" + section + "]");
    it->second(at, value);
  }
  for (const auto& [name, t] : cfg.profiles) {
    if (t.r.size() != t.f.size() || t.r.size() < 4)
      throw ConfigError(source, profile_line[name], 1, "profile '" + name + "' needs r and f lists of equal length >= 4");
    for (std::size_t i = 1; i < t.r.size(); ++i)
      if (!(t.r[i] > t.r[i - 1]))
        throw ConfigError(source, profile_line[name], 1, "profile '" + name + "' radii must be strictly increasing");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, 0, "cannot open config file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace splitlab
