#include "splitlab/bundle/generators.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace splitlab {

namespace {

const cplx I(0, 1);

int eps(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0;
  return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

void check_drift(const Section& in, const Section& out, const GeneratorOptions& opt, const char* what) {
  if (opt.eps_perp < 0 || !in.rep().is_massless() || in.dim() != 3) return;
  const double scale = max_abs(in) + max_abs(out);
  const double drift = transversality_defect(out);
  if (drift > opt.eps_perp * scale)
    throw ConstraintDrift(std::string("transversality drift after ") + what + ": |khat.psi| = " + std::to_string(drift) +
                          " exceeds " + std::to_string(opt.eps_perp) + " * " + std::to_string(scale));
}

// Apply a spin-matrix combination sum_a coef[a] S_a at one node.
void fiber_apply(const std::array<FiberMatrix, 3>& s, const std::array<double, 3>& coef, const cplx* in, cplx* out,
                 int d, cplx scale) {
  for (int r = 0; r < d; ++r) {
    cplx acc(0, 0);
    for (int a = 0; a < 3; ++a) {
      if (coef[a] == 0) continue;
      for (int c = 0; c < d; ++c) acc += coef[a] * s[a](r, c) * in[c];
    }
    out[r] += scale * acc;
  }
}

}  // namespace

GeneratorAction parse_generator(const std::string& name) {
  static const std::pair<const char*, GenKind> table[] = {{"Jperp", GenKind::Jperp}, {"Jpar", GenKind::Jpar},
                                                          {"Kperp", GenKind::Kperp}, {"Kpar", GenKind::Kpar},
                                                          {"J", GenKind::J},         {"K", GenKind::K},
                                                          {"P", GenKind::P}};
  if (name == "H") return {GenKind::H, 0};
  if (name == "chi") return {GenKind::Chi, 0};
  for (const auto& [prefix, kind] : table) {
    const std::string p(prefix);
    if (name.size() == p.size() + 1 && name.compare(0, p.size(), p) == 0 && name.back() >= '1' && name.back() <= '3')
      return {kind, name.back() - '0'};
  }
  throw std::invalid_argument("unknown generator '" + name + "'");
}

std::string generator_name(const GeneratorAction& g) {
  switch (g.kind) {
    case GenKind::H: return "H";
    case GenKind::Chi: return "chi";
    case GenKind::P: return "P" + std::to_string(g.index);
    case GenKind::J: return "J" + std::to_string(g.index);
    case GenKind::K: return "K" + std::to_string(g.index);
    case GenKind::Jpar: return "Jpar" + std::to_string(g.index);
    case GenKind::Jperp: return "Jperp" + std::to_string(g.index);
    case GenKind::Kpar: return "Kpar" + std::to_string(g.index);
    case GenKind::Kperp: return "Kperp" + std::to_string(g.index);
  }
  return "?";
}

Partials partials(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const int nr = g.n_r(), nt = g.n_theta(), np = g.n_phi(), d = psi.dim();
  const auto& in = psi.data();
  Partials out;
  out.dr.assign(in.size(), cplx(0, 0));
  out.dt.assign(in.size(), cplx(0, 0));
  out.dp.assign(in.size(), cplx(0, 0));
  const std::size_t ang = g.angular_size() * d;

  // radial
  const auto& Dr = g.d_r();
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nr; ++j) {
      const double w = Dr[static_cast<std::size_t>(i) * nr + j];
      if (w == 0) continue;
      const cplx* src = &in[j * ang];
      cplx* dst = &out.dr[i * ang];
      for (std::size_t q = 0; q < ang; ++q) dst[q] += w * src[q];
    }

  // azimuthal
  const auto& Dp = g.d_phi();
  for (int ir = 0; ir < nr; ++ir)
    for (int it = 0; it < nt; ++it) {
      const std::size_t base = g.index(ir, it, 0) * d;
      for (int i = 0; i < np; ++i) {
        cplx* dst = &out.dp[base + static_cast<std::size_t>(i) * d];
        for (int j = 0; j < np; ++j) {
          const double w = Dp[static_cast<std::size_t>(i) * np + j];
          if (w == 0) continue;
          const cplx* src = &in[base + static_cast<std::size_t>(j) * d];
          for (int c = 0; c < d; ++c) dst[c] += w * src[c];
        }
      }
    }

  // polar, on the doubled circle: meridian phi followed by meridian phi + pi traversed backwards
  const auto& Dt = g.d_theta_ext();
  const int m = 2 * nt, half = np / 2;
  const double par = psi.parity();
  std::vector<std::size_t> idx(m);
  std::vector<cplx> line(static_cast<std::size_t>(m) * d), dline(static_cast<std::size_t>(m) * d);
  for (int ir = 0; ir < nr; ++ir)
    for (int ip = 0; ip < half; ++ip) {
      for (int j = 0; j < nt; ++j) {
        idx[j] = g.index(ir, j, ip) * d;
        idx[nt + j] = g.index(ir, nt - 1 - j, ip + half) * d;
      }
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < d; ++c) line[static_cast<std::size_t>(j) * d + c] = (j < nt ? 1.0 : par) * in[idx[j] + c];
      std::fill(dline.begin(), dline.end(), cplx(0, 0));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double w = Dt[static_cast<std::size_t>(i) * m + j];
          if (w == 0) continue;
          for (int c = 0; c < d; ++c) dline[static_cast<std::size_t>(i) * d + c] += w * line[static_cast<std::size_t>(j) * d + c];
        }
      for (int j = 0; j < m; ++j) {
        const double sgn = j < nt ? 1.0 : -par;
        for (int c = 0; c < d; ++c) out.dt[idx[j] + c] = sgn * dline[static_cast<std::size_t>(j) * d + c];
      }
    }
  return out;
}

Triple gradient(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const Partials pd = partials(psi);
  const int d = psi.dim();
  Triple out{psi.zeros_like(), psi.zeros_like(), psi.zeros_like()};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const int it = g.theta_index(n), ip = g.phi_index(n);
    const double r = g.radius(n), st = std::sin(g.theta(it));
    const Vec3 kh = g.khat(it, ip), et = g.e_theta(it, ip), ep = g.e_phi(it, ip);
    for (int c = 0; c < d; ++c) {
      const std::size_t q = n * d + c;
      const cplx a = pd.dr[q], b = pd.dt[q] / r, e = pd.dp[q] / (r * st);
      for (int k = 0; k < 3; ++k) out[k].at(n, c) = kh[k] * a + et[k] * b + ep[k] * e;
    }
  }
  return out;
}

Triple apply_J(const Section& psi, const GeneratorOptions& opt) {
  const MomentumGrid& g = *psi.grid();
  const Partials pd = partials(psi);
  const auto S = spin_matrices(psi.rep());
  const int d = psi.dim();
  const bool spin = !(S[0].isZero() && S[1].isZero() && S[2].isZero());
  Triple out{psi.zeros_like(), psi.zeros_like(), psi.zeros_like()};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const int it = g.theta_index(n), ip = g.phi_index(n);
    const double st = std::sin(g.theta(it));
    const Vec3 et = g.e_theta(it, ip), ep = g.e_phi(it, ip);
    for (int a = 0; a < 3; ++a) {
      cplx* dst = &out[a].at(n, 0);
      for (int c = 0; c < d; ++c) {
        const std::size_t q = n * d + c;
        dst[c] = -I * (ep[a] * pd.dt[q] - et[a] * pd.dp[q] / st);
      }
      if (spin) {
        std::array<double, 3> coef{0, 0, 0};
        coef[a] = 1;
        fiber_apply(S, coef, &psi.at(n, 0), dst, d, 1.0);
      }
    }
  }
  for (int a = 0; a < 3; ++a) check_drift(psi, out[a], opt, "J");
  return out;
}

Triple apply_K(const Section& psi, const GeneratorOptions& opt) {
  const MomentumGrid& g = *psi.grid();
  const RepSpec& rep = psi.rep();
  const int d = psi.dim();
  Triple out{psi.zeros_like(), psi.zeros_like(), psi.zeros_like()};
  if (rep.is_massless()) {
    // K = khat (khat . K) + khat x J, with the radial component i |k| d/d|k| carrying khat on the left.
    const Triple j = apply_J(psi, GeneratorOptions{-1});
    const Partials pd = partials(psi);
    for (std::size_t n = 0; n < g.size(); ++n) {
      const Vec3 kh = g.khat(n);
      const double r = g.radius(n);
      for (int c = 0; c < d; ++c) {
        const cplx radial = I * r * pd.dr[n * d + c];
        for (int a = 0; a < 3; ++a) {
          const int b = (a + 1) % 3, e = (a + 2) % 3;
          out[a].at(n, c) = kh[a] * radial + kh[b] * j[e].at(n, c) - kh[e] * j[b].at(n, c);
        }
      }
    }
  } else {
    const Triple grad = gradient(psi);
    const auto S = spin_matrices(rep);
    const bool spin = rep.spin > 0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const Vec3 k = g.k(n);
      const double w = energy(rep, g.radius(n));
      for (int a = 0; a < 3; ++a) {
        cplx* dst = &out[a].at(n, 0);
        for (int c = 0; c < d; ++c) dst[c] = I * w * grad[a].at(n, c);
        if (spin) {
          // (S x k)_a = eps_{abc} S_b k_c
          std::array<double, 3> coef{0, 0, 0};
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) coef[b] += eps(a, b, c) * k[c];
          fiber_apply(S, coef, &psi.at(n, 0), dst, d, rep.sigma / (w + rep.mass));
        }
      }
    }
  }
  for (int a = 0; a < 3; ++a) check_drift(psi, out[a], opt, "K");
  return out;
}

Triple apply_P(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const int d = psi.dim();
  Triple out{psi, psi, psi};
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 k = g.k(n);
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < d; ++c) out[a].at(n, c) *= k[a];
  }
  return out;
}

Section apply_H(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  Section out = psi;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double w = energy(psi.rep(), g.radius(n));
    for (int c = 0; c < psi.dim(); ++c) out.at(n, c) *= w;
  }
  return out;
}

Section apply_chi(const Section& psi) {
  const MomentumGrid& g = *psi.grid();
  const auto S = spin_matrices(psi.rep());
  Section out = psi.zeros_like();
  for (std::size_t n = 0; n < g.size(); ++n) fiber_apply(S, g.khat(n), &psi.at(n, 0), &out.at(n, 0), psi.dim(), 1.0);
  return out;
}

namespace {

Section along_khat(const Section& scalar_part, int a) {
  const MomentumGrid& g = *scalar_part.grid();
  Section out = scalar_part;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double u = g.khat(n)[a];
    for (int c = 0; c < out.dim(); ++c) out.at(n, c) *= u;
  }
  return out;
}

Section khat_dot(const Triple& v) {
  const MomentumGrid& g = *v[0].grid();
  Section out = v[0].zeros_like();
  for (std::size_t n = 0; n < g.size(); ++n) {
    const Vec3 u = g.khat(n);
    for (int c = 0; c < out.dim(); ++c) out.at(n, c) = u[0] * v[0].at(n, c) + u[1] * v[1].at(n, c) + u[2] * v[2].at(n, c);
  }
  return out;
}

}  // namespace

Section apply_generator(const Section& psi, const GeneratorAction& g, const GeneratorOptions& opt) {
  const int a = g.index - 1;
  if (g.kind != GenKind::H && g.kind != GenKind::Chi && (a < 0 || a > 2))
    throw std::invalid_argument("generator component must be 1, 2 or 3");
  switch (g.kind) {
    case GenKind::H: return apply_H(psi);
    case GenKind::P: return apply_P(psi)[a];
    case GenKind::J: return apply_J(psi, opt)[a];
    case GenKind::K: return apply_K(psi, opt)[a];
    case GenKind::Chi: return apply_chi(psi);
    case GenKind::Jpar: return along_khat(apply_chi(psi), a);
    case GenKind::Jperp: {
      Section out = apply_J(psi, opt)[a] - along_khat(apply_chi(psi), a);
      check_drift(psi, out, opt, "Jperp");
      return out;
    }
    case GenKind::Kpar: return along_khat(khat_dot(apply_K(psi, opt)), a);
    case GenKind::Kperp: {
      const Triple k = apply_K(psi, opt);
      Section out = k[a] - along_khat(khat_dot(k), a);
      check_drift(psi, out, opt, "Kperp");
      return out;
    }
  }
  throw std::logic_error("unhandled generator");
}

// ---------------------------------------------------------------------------------------------
// Relation catalog

namespace {

enum class Op { J, K, P, H };

struct FamilySpec {
  const char* name;
  Op a, b;
  bool pairs_ordered;  // all 9 pairs (a, b) or only a < b
};

const FamilySpec kFamilies[] = {
    {"JJ", Op::J, Op::J, false}, {"JK", Op::J, Op::K, true}, {"KK", Op::K, Op::K, false},
    {"JP", Op::J, Op::P, true},  {"KP", Op::K, Op::P, true}, {"KH", Op::K, Op::H, true},
    {"JH", Op::J, Op::H, true},  {"PH", Op::P, Op::H, true}, {"PP", Op::P, Op::P, false},
    {"HH", Op::H, Op::H, true}};

const char* op_letter(Op o) {
  switch (o) {
    case Op::J: return "J";
    case Op::K: return "K";
    case Op::P: return "P";
    case Op::H: return "H";
  }
  return "?";
}

bool is_vector(Op o) { return o != Op::H; }

std::vector<std::pair<int, int>> members(const FamilySpec& f) {
  std::vector<std::pair<int, int>> out;
  const int na = is_vector(f.a) ? 3 : 1, nb = is_vector(f.b) ? 3 : 1;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      if (f.pairs_ordered || a < b || (na == 1 && nb == 1)) out.emplace_back(a, b);
  return out;
}

std::string member_id(const FamilySpec& f, int a, int b) {
  std::string id = std::string(f.name) + ".";
  if (is_vector(f.a)) id += std::to_string(a + 1);
  if (is_vector(f.b)) id += std::to_string(b + 1);
  if (!is_vector(f.a) && !is_vector(f.b)) id += "0";
  return id;
}

std::string rhs_text(const FamilySpec& f, int a, int b) {
  const std::string fam = f.name;
  const int c = 3 - a - b;
  auto eps_term = [&](const char* coef, const char* gen) -> std::string {
    const int e = (a == b) ? 0 : eps(a, b, c);
    if (e == 0) return "0";
    std::string s = (e > 0) == (coef[0] != '-') ? "i " : "-i ";
    return s + gen + std::to_string(c + 1);
  };
  if (fam == "JJ") return eps_term("+", "J");
  if (fam == "JK") return eps_term("+", "K");
  if (fam == "KK") return eps_term("-", "J");
  if (fam == "JP") return eps_term("+", "P");
  if (fam == "KP") return a == b ? "i H" : "0";
  if (fam == "KH") return "i P" + std::to_string(a + 1);
  return "0";
}

std::string lhs_text(const FamilySpec& f, int a, int b) {
  auto name = [](Op o, int i) { return std::string(op_letter(o)) + (is_vector(o) ? std::to_string(i + 1) : ""); };
  return "[" + name(f.a, a) + "," + name(f.b, b) + "]";
}

const FamilySpec& family_spec(const std::string& name) {
  for (const auto& f : kFamilies)
    if (name == f.name) return f;
  throw std::invalid_argument("unknown relation '" + name + "'");
}

Triple apply_op(Op o, const Section& psi) {
  switch (o) {
    case Op::J: return apply_J(psi, GeneratorOptions{-1});
    case Op::K: return apply_K(psi, GeneratorOptions{-1});
    case Op::P: return apply_P(psi);
    case Op::H: {
      Section h = apply_H(psi);
      return Triple{h, h.zeros_like(), h.zeros_like()};
    }
  }
  throw std::logic_error("unhandled operator");
}

}  // namespace

const std::vector<Relation>& relation_catalog() {
  static const std::vector<Relation> cat = [] {
    std::vector<Relation> out;
    for (const auto& f : kFamilies)
      for (auto [a, b] : members(f)) out.push_back({member_id(f, a, b), f.name, lhs_text(f, a, b) + " = " + rhs_text(f, a, b)});
    return out;
  }();
  return cat;
}

const std::vector<std::string>& relation_families() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : kFamilies) out.emplace_back(f.name);
    return out;
  }();
  return names;
}

std::vector<std::pair<std::string, double>> family_residuals(const Section& psi, const std::string& family) {
  const FamilySpec& f = family_spec(family);
  const double base = norm(psi);
  if (base == 0) throw std::invalid_argument("algebra residual of the zero section");
  const auto pairs = members(f);
  const Triple bpsi = apply_op(f.b, psi);
  const Triple apsi = apply_op(f.a, psi);
  const int na = is_vector(f.a) ? 3 : 1, nb = is_vector(f.b) ? 3 : 1;
  std::array<std::optional<Triple>, 3> a_of_b, b_of_a;
  for (auto [a, b] : pairs) {
    if (!a_of_b[b]) a_of_b[b] = apply_op(f.a, bpsi[b]);
    if (!b_of_a[a]) b_of_a[a] = apply_op(f.b, apsi[a]);
  }
  (void)na;
  (void)nb;
  std::vector<std::pair<std::string, double>> out;
  const std::string fam = f.name;
  for (auto [a, b] : pairs) {
    Section comm = (*a_of_b[b])[a] - (*b_of_a[a])[b];
    const int c = 3 - a - b;
    const int e = (a == b) ? 0 : eps(a, b, c);
    if (fam == "JJ" && e) comm -= cplx(0, e) * apsi[c];
    if (fam == "JK" && e) comm -= cplx(0, e) * bpsi[c];
    if (fam == "KK" && e) comm -= cplx(0, -e) * apply_J(psi, GeneratorOptions{-1})[c];
    if (fam == "JP" && e) comm -= cplx(0, e) * bpsi[c];
    if (fam == "KP" && a == b) comm -= I * apply_H(psi);
    if (fam == "KH") comm -= I * apply_P(psi)[a];
    out.emplace_back(member_id(f, a, b), norm(comm) / base);
  }
  return out;
}

double algebra_residual(const Section& psi, const std::string& relation_id) {
  const auto dot = relation_id.find('.');
  const std::string family = relation_id.substr(0, dot);
  const auto all = family_residuals(psi, family);
  if (dot == std::string::npos) {
    double worst = 0;
    for (const auto& [id, v] : all) worst = std::max(worst, v);
    return worst;
  }
  for (const auto& [id, v] : all)
    if (id == relation_id) return v;
  throw std::invalid_argument("unknown relation '" + relation_id + "'");
}

}  // namespace splitlab
