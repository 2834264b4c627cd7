#include <doctest.h>

#include "splitlab/algebra/identities.hpp"
#include "splitlab/lang/format.hpp"
#include "splitlab/lang/fuzz.hpp"
#include "splitlab/lang/lower.hpp"
#include "splitlab/lang/parser.hpp"

using namespace splitlab;
using namespace splitlab::lang;

namespace {

OperatorExpr eval(const std::string& s, const RingRef& r = massive_ring()) { return lower_scalar(parse(s), r); }

LangErrorKind error_kind(const std::string& s) {
  try {
    (void)lower(parse(s), massive_ring());
  } catch (const LangError& e) {
    return e.kind();
  }
  FAIL("no error for " << s);
  return LangErrorKind::Syntax;
}

}  // namespace

TEST_CASE("parse shapes") {
  auto a = parse("Comm(K[1]/H, K[2]/H)");
  CHECK(a.kind == AstKind::Call);
  CHECK(a.name == "Comm");
  REQUIRE(a.args.size() == 2);
  CHECK(a.args[0].kind == AstKind::Div);
  CHECK(a.args[1].kind == AstKind::Div);
  auto b = parse("Dot(Phat,K) - Dot(K,Phat) + 2*i*H/Pow(Dot(P,P),1)");
  CHECK(b.kind == AstKind::Add);
  CHECK(format(parse(format(b))) == format(b));
  auto c = parse("1 - 2 - 3");
  CHECK(c.kind == AstKind::Sub);
  CHECK(c.args[0].kind == AstKind::Sub);
  auto d = parse("1 + 2*3");
  CHECK(d.args[1].kind == AstKind::Mul);
}

TEST_CASE("parse errors carry locations") {
  try {
    parse("J - i*Cross(P, Q)");
    FAIL("expected error");
  } catch (const LangError& e) {
    CHECK(e.kind() == LangErrorKind::UnknownIdentifier);
    CHECK(e.span().line == 1);
    CHECK(e.span().column == 16);
  }
  try {
    parse("K[1] +\n  J[4]");
    FAIL("expected error");
  } catch (const LangError& e) {
    CHECK(e.kind() == LangErrorKind::IndexOutOfRange);
    CHECK(e.span().line == 2);
    CHECK(e.span().column == 5);
  }
  CHECK_THROWS_AS(parse("(K[1]"), LangError);
  CHECK_THROWS_AS(parse("K[1] K[2]"), LangError);
  CHECK_THROWS_AS(parse("Pow(H, x)"), LangError);
  CHECK_THROWS_AS(parse(""), LangError);
  CHECK_THROWS_AS(parse(std::string(5000, '(') + "1" + std::string(5000, ')')), LangError);
}

TEST_CASE("lowering") {
  auto r = massive_ring();
  auto i = OperatorExpr::imag(r);
  CHECK(eval("Comm(K[1], Pow(H,2))").identical(OperatorExpr::constant(r, GaussQ(2)) * i * OperatorExpr::P(r, 1) * OperatorExpr::H(r)));
  CHECK(eval("Comm(J[1],J[1])").is_zero());
  CHECK(eval("Dot(P,Cross(P,J))").is_zero());
  CHECK(eval("Comm(K[1],K[2]) + i*J[3]").is_zero());
  CHECK(eval("Dot(P,K) - Dot(K,P) + 3*i*H").is_zero());
  CHECK(eval("H*H - Dot(P,P)", massless_ring()).is_zero());
  CHECK(eval("Dot(Phat,K) - Dot(K,Phat) + 2*i*H/Dot(P,Phat)").is_zero());
  CHECK(error_kind("K[1]/K[2]") == LangErrorKind::NonScalarDivision);
  CHECK(error_kind("J + H") == LangErrorKind::Arity);
  CHECK(error_kind("J*K") == LangErrorKind::Arity);
  CHECK(error_kind("H/(m - m)") == LangErrorKind::DivisionByZero);
  CHECK(error_kind("Pow(K[1], -1)") == LangErrorKind::NonScalarDivision);
  CHECK(error_kind("Pow(K[1]+K[2]+K[3], 12)") == LangErrorKind::Limit);
}

TEST_CASE("printer") {
  auto r = massive_ring();
  CHECK(format(-(OperatorExpr::imag(r) * OperatorExpr::J(r, 3))) == "-i*J[3]");
  auto dk = boost_connection(r);
  CHECK(format(dk[0]) == "-1/2*P[1]/Pow(H, 2) - i*H*K[1]/Pow(H, 2)");
  CHECK(eval(format(dk[0])).identical(dk[0]));
  CHECK(eval("-i*(K[1]/H) - P[1]/(2*Pow(H,2))").identical(dk[0]));
}

TEST_CASE("round trip over the identity catalog") {
  const RoundTripStats st = catalog_round_trip();
  INFO(st.first_failure);
  CHECK(st.expressions > 500);
  CHECK(st.identical == st.expressions);
}

TEST_CASE("fuzz: only structured errors") {
  const FuzzStats st = fuzz(20240611, 100000);
  INFO(st.first_failure);
  CHECK(st.unstructured == 0);
  CHECK(st.round_trip_failures == 0);
  CHECK(st.accepted > 1000);
  CHECK(st.rejected > 1000);
  CHECK(st.accepted + st.rejected == st.cases);
}
