#include <doctest.h>

#include "oracle/oracle.hpp"
#include "snebr/parser.hpp"
#include "snebr/term.hpp"

using namespace snebr;

namespace {

TermId in(TermStore& s, const std::string& text) { return s.intern(parse(text)); }

}  // namespace

TEST_CASE("identical structure interns to one id")
{
    TermStore s;
    auto a = in(s, "all(x)(JOCK(x) => ~SMART(x))");
    auto b = in(s, "all(X)(jock(X) => (~Smart(X)))");
    CHECK(a == b);
    CHECK(s.kind(a) == TermKind::forall);
    CHECK(in(s, "P(A) and Q(A)") == in(s, "Q(A) and P(A)"));
    CHECK(in(s, "P(A) or (Q(A) or R(A))") == in(s, "(R(A) or P(A)) or Q(A)"));
    CHECK(in(s, "P(A) and P(A)") == in(s, "P(A)"));
    CHECK(in(s, "~~P(A)") != in(s, "P(A)"));
}

TEST_CASE("display indices follow first interning of propositions")
{
    TermStore s;
    auto p = in(s, "P(A)");
    auto q = in(s, "~Q(A)");
    CHECK(s.label(p) == "WFF1");
    CHECK(s.label(s.node(q).args[0]) == "WFF2");
    CHECK(s.label(q) == "WFF3");
    CHECK(s.node(s.node(p).args[0]).display_index == 0);
    CHECK(s.by_display_index(3) == q);
    CHECK_FALSE(s.by_display_index(4).has_value());
    CHECK(in(s, "P(A)") == p);
    CHECK(s.label(in(s, "P(A)")) == "WFF1");
}

TEST_CASE("rendering matches the transcript style")
{
    TermStore s;
    CHECK(s.render(in(s, "all(x)(JOCK(x) => ~SMART(x))")) == "all(X)(JOCK(X) => (~SMART(X)))");
    CHECK(s.render(in(s, "all(x)(GRAD(x) => SMART(x))")) == "all(X)(GRAD(X) => SMART(X))");
    CHECK(s.render(in(s, "FEMALE(FRAN) and OLD(FRAN) and GRAD(FRAN) and JOCK(FRAN)")) ==
          "FEMALE(FRAN) and OLD(FRAN) and GRAD(FRAN) and JOCK(FRAN)");
    CHECK(s.render(in(s, "GREATER(HOLYBOOK, PROF)")) == "GREATER(HOLYBOOK,PROF)");
    CHECK(s.render(in(s, "(P(A) or Q(A)) and R(A)")) == "(P(A) or Q(A)) and R(A)");
}

TEST_CASE("complement is the negation partner")
{
    TermStore s;
    auto p = in(s, "P(A)");
    CHECK_FALSE(s.complement(p).has_value());
    auto np = in(s, "~P(A)");
    CHECK(s.complement(p) == np);
    CHECK(s.complement(np) == p);
}

TEST_CASE("matching binds variables consistently")
{
    TermStore s;
    auto rule = in(s, "all(x)(all(y)(T(x,y) => P(y)))");
    auto pattern = s.node(s.node(s.node(rule).args[0]).args[0]).args[0];
    auto ground = in(s, "T(ANN,BOB)");
    Binding b;
    REQUIRE(s.match(pattern, ground, {"X", "Y"}, b));
    CHECK(s.render(b.at("X")) == "ANN");
    CHECK(s.render(b.at("Y")) == "BOB");
    Binding clash{{"X", b.at("Y")}};
    CHECK_FALSE(s.match(pattern, ground, {"X", "Y"}, clash));
    auto inst = s.instantiate(s.node(s.node(s.node(rule).args[0]).args[0]).args[1], b);
    CHECK(s.render(inst) == "P(BOB)");
}

TEST_CASE("parse errors carry position and expectation")
{
    try {
        parse("P(A) and");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 9);
        CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(parse("P(A"), ParseError);
    CHECK_THROWS_AS(parse("P"), ParseError);
    CHECK_THROWS_AS(parse("all(x)(P(A))"), ParseError);
    CHECK_THROWS_AS(parse("P(A) => "), ParseError);
    CHECK_THROWS_AS(parse("SOURCE(NERD, wff99)", [](int) { return std::nullopt; }), ParseError);
    try {
        parse("P(A)\n and Q(");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("meta-predicates accept nested wffs and references")
{
    TermStore s;
    auto rule = in(s, "all(x)(JOCK(x) => ~SMART(x))");
    auto nested = in(s, "SOURCE(NERD, all(x)(JOCK(x) => ~SMART(x)))");
    int index = s.node(rule).display_index;
    auto by_ref = s.intern(parse("SOURCE(NERD, wff" + std::to_string(index) + ")", [&](int i) -> std::optional<Term> {
        auto id = s.by_display_index(i);
        if (!id) return std::nullopt;
        return s.to_term(*id);
    }));
    CHECK(nested == by_ref);
    CHECK(s.node(nested).args[1] == rule);
}

TEST_CASE("implication is right associative and binds loosest")
{
    TermStore s;
    CHECK(in(s, "P(A) => Q(A) => R(A)") == in(s, "P(A) => (Q(A) => R(A))"));
    CHECK(in(s, "P(A) and Q(A) => R(A)") == in(s, "(P(A) and Q(A)) => R(A)"));
    CHECK(in(s, "P(A) or Q(A) and R(A)") == in(s, "P(A) or (Q(A) and R(A))"));
    CHECK(in(s, "~P(A) and Q(A)") == in(s, "(~P(A)) and Q(A)"));
}

TEST_CASE("parse and render round trip on random formulas")
{
    auto r = oracle::round_trip_suite(7, 1000);
    INFO(r.first_failure);
    CHECK(r.cases == 1000);
    CHECK(r.failures == 0);
}
