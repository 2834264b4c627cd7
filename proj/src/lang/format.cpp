#include "splitlab/lang/format.hpp"

namespace splitlab::lang {

namespace {

int prec(const OpAst& n) {
  switch (n.kind) {
    case AstKind::Add:
    case AstKind::Sub: return 1;
    case AstKind::Mul:
    case AstKind::Div: return 2;
    case AstKind::Neg: return 3;
    default: return 4;
  }
}

std::string fmt(const OpAst& n) {
  auto wrap = [](const OpAst& c, bool need) { return need ? "(" + fmt(c) + ")" : fmt(c); };
  switch (n.kind) {
    case AstKind::Integer: return n.value.get_str();
    case AstKind::Atom: return n.name;
    case AstKind::IndexedAtom: return n.name + "[" + std::to_string(n.index) + "]";
    case AstKind::Neg: return "-" + wrap(n.args[0], prec(n.args[0]) < 3);
    case AstKind::Add:
    case AstKind::Sub:
    case AstKind::Mul:
    case AstKind::Div: {
      const int p = prec(n);
      const char* op = n.kind == AstKind::Add ? " + " : n.kind == AstKind::Sub ? " - " : n.kind == AstKind::Mul ? "*" : "/";
      return wrap(n.args[0], prec(n.args[0]) < p) + op + wrap(n.args[1], prec(n.args[1]) <= p);
    }
    case AstKind::Call: {
      std::string s = n.name + "(" + fmt(n.args[0]);
      if (n.name == "Pow") return s + ", " + std::to_string(n.index) + ")";
      for (std::size_t k = 1; k < n.args.size(); ++k) s += ", " + fmt(n.args[k]);
      return s + ")";
    }
  }
  return "?";
}

std::string gauss_str(const GaussQ& c) {
  auto imag_part = [](const mpq_class& b) {
    if (b == 1) return std::string("i");
    if (b == -1) return std::string("-i");
    return b.get_str() + "*i";
  };
  if (sgn(c.im) == 0) return c.re.get_str();
  if (sgn(c.re) == 0) return imag_part(c.im);
  std::string im = imag_part(abs(c.im));
  return "(" + c.re.get_str() + (sgn(c.im) > 0 ? " + " : " - ") + im + ")";
}

std::string var_power(const std::string& base, int e) {
  if (e == 1) return base;
  return "Pow(" + base + ", " + std::to_string(e) + ")";
}

// Monomial factors without the coefficient, "" for the constant monomial.
std::string mono_str(Mono m) {
  static const char* names[kNumVars] = {"m", "P[1]", "P[2]", "P[3]", "Dot(P, Phat)", "H"};
  std::string s;
  for (int v = 0; v < kNumVars; ++v) {
    const int e = mono_exp(m, static_cast<Var>(v));
    if (e == 0) continue;
    if (!s.empty()) s += "*";
    s += var_power(names[v], e);
  }
  return s;
}

std::string term_str(const GaussQ& c, const std::string& factors) {
  if (factors.empty()) return gauss_str(c);
  if (c.is_one()) return factors;
  if (c == GaussQ(-1)) return "-" + factors;
  return gauss_str(c) + "*" + factors;
}

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string s = terms[0];
  for (std::size_t k = 1; k < terms.size(); ++k) {
    if (terms[k][0] == '-') {
      s += " - " + terms[k].substr(1);
    } else {
      s += " + " + terms[k];
    }
  }
  return s;
}

std::string poly_str(const Poly& p) {
  std::vector<std::string> terms;
  for (const auto& t : p.terms()) terms.push_back(term_str(t.coef, mono_str(t.mono)));
  return join_terms(terms);
}

std::string den_str(const ScalarCoeff& c) {
  const Ring& ring = *c.ring();
  std::vector<std::string> fs;
  for (const auto& [f, e] : c.denominator()) {
    if (!ring.energy_sq.is_zero() && f == ring.energy_sq) {
      fs.push_back(var_power("H", 2 * e));
    } else if (!ring.abs_p_sq.is_zero() && f == ring.abs_p_sq) {
      fs.push_back(var_power("Dot(P, P)", e));
    } else if (f.terms().size() == 1 && f.leading().coef.is_one()) {
      const std::string b = mono_str(f.leading().mono);
      fs.push_back(e == 1 ? b : "Pow(" + b + ", " + std::to_string(e) + ")");
    } else {
      fs.push_back(var_power("(" + poly_str(f) + ")", e));
    }
  }
  std::string s;
  for (const auto& f : fs) s += (s.empty() ? "" : "*") + f;
  return s;
}

std::string with_den(const std::string& body, const ScalarCoeff& c) {
  if (c.denominator().empty()) return body;
  const std::string d = den_str(c);
  const bool single = c.denominator().size() == 1 && d.find('*') == std::string::npos;
  return body + "/" + (single ? d : "(" + d + ")");
}

}  // namespace

std::string format(const OpAst& ast) { return fmt(ast); }

std::string format(const ScalarCoeff& c) {
  const Poly& n = c.numerator();
  std::string body = poly_str(n);
  if (n.terms().size() > 1 && !c.denominator().empty()) body = "(" + body + ")";
  return with_den(body, c);
}

std::string format(const OperatorExpr& e) {
  std::vector<std::string> terms;
  for (const auto& [w, c] : e.terms()) {
    if (w.empty()) {
      std::string s = format(c);
      if (c.numerator().terms().size() > 1 && c.denominator().empty()) s = "(" + s + ")";
      terms.push_back(s);
      continue;
    }
    std::string word;
    for (Gen g : w) {
      if (!word.empty()) word += "*";
      word += std::string(is_boost(g) ? "K" : "J") + "[" + std::to_string(gen_index(g)) + "]";
    }
    const Poly& n = c.numerator();
    std::string t;
    if (n.terms().size() == 1) {
      const std::string f = mono_str(n.leading().mono);
      t = term_str(n.leading().coef, f.empty() ? word : f + "*" + word);
    } else {
      t = "(" + poly_str(n) + ")*" + word;
    }
    terms.push_back(with_den(t, c));
  }
  return join_terms(terms);
}

std::string format(const VectorExpr& v) { return "[" + format(v[0]) + ", " + format(v[1]) + ", " + format(v[2]) + "]"; }

}  // namespace splitlab::lang
