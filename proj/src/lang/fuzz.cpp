#include "splitlab/lang/fuzz.hpp"

#include "splitlab/algebra/identities.hpp"
#include "splitlab/lang/format.hpp"
#include "splitlab/lang/lower.hpp"
#include "splitlab/lang/parser.hpp"

#include <iterator>

namespace splitlab::lang {

std::string random_expression(std::mt19937_64& rng, int depth) {
  static const char* leaves[] = {"H", "m", "i", "P", "J", "K", "Phat", "P[1]", "J[2]", "K[3]", "K[1]", "2", "0", "7", "P[3]"};
  static const char* calls[] = {"Comm", "Dot", "Cross", "Adjoint", "Pow"};
  std::uniform_int_distribution<int> pick(0, 9);
  const int c = depth <= 0 ? 0 : pick(rng);
  auto sub = [&] { return random_expression(rng, depth - 1); };
  switch (c) {
    case 0:
    case 1: return leaves[rng() % std::size(leaves)];
    case 2: return sub() + " + " + sub();
    case 3: return sub() + " - " + sub();
    case 4: return sub() + "*" + sub();
    case 5: return sub() + "/" + sub();
    case 6: return "-" + sub();
    case 7: return "(" + sub() + ")";
    default: {
      const std::string f = calls[rng() % std::size(calls)];
      if (f == "Adjoint") return f + "(" + sub() + ")";
      if (f == "Pow") return f + "(" + sub() + ", " + std::to_string(static_cast<int>(rng() % 7) - 3) + ")";
      return f + "(" + sub() + ", " + sub() + ")";
    }
  }
}

std::string mutate_expression(std::mt19937_64& rng, std::string s) {
  static const std::string junk = "()[],+-*/ 0123456789HmiPJKQ\n";
  const int edits = static_cast<int>(rng() % 3);
  for (int k = 0; k < edits && !s.empty(); ++k) {
    const std::size_t pos = rng() % s.size();
    switch (rng() % 3) {
      case 0: s.erase(pos, 1); break;
      case 1: s.insert(pos, 1, junk[rng() % junk.size()]); break;
      default: s[pos] = junk[rng() % junk.size()];
    }
  }
  return s;
}

FuzzStats fuzz(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  const RingRef rings[2] = {massive_ring(), massless_ring()};
  FuzzStats st;
  for (int n = 0; n < cases; ++n) {
    const std::string text = mutate_expression(rng, random_expression(rng, 1 + static_cast<int>(rng() % 4)));
    const RingRef& ring = rings[n & 1];
    ++st.cases;
    try {
      const Value v = lower(parse(text), ring);
      ++st.accepted;
      if (const auto* e = std::get_if<OperatorExpr>(&v)) {
        const std::string back = format(*e);
        if (!(lower_scalar(parse(back), ring) - *e).is_zero()) {
          if (st.round_trip_failures++ == 0) st.first_failure = text + " -> " + back;
        }
      }
    } catch (const LangError&) {
      ++st.rejected;
    } catch (const std::exception& ex) {
      if (st.unstructured++ == 0) st.first_failure = text + ": " + ex.what();
    }
  }
  return st;
}

RoundTripStats catalog_round_trip() {
  RoundTripStats st;
  for (const RingRef& ring : {massive_ring(), massless_ring()})
    for (const auto& entry : identity_catalog()) {
      if (entry.needs_mass && ring->massless) continue;
      const auto sides = entry.build(ring);
      for (const auto* side : {&sides.lhs, &sides.rhs})
        for (const auto& e : *side) {
          ++st.expressions;
          const std::string text = format(e);
          bool same = false;
          try {
            same = lower_scalar(parse(text), e.ring()).identical(e);
          } catch (const std::exception&) {
          }
          if (same)
            ++st.identical;
          else if (st.first_failure.empty())
            st.first_failure = entry.name + ": " + text;
        }
    }
  return st;
}

}  // namespace splitlab::lang
