#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlogic/errors.hpp"
#include "mlogic/formula.hpp"
#include "mlogic/log.hpp"

using namespace mlogic;

namespace {
Formula p() { return Formula::atom("p"); }
Formula q() { return Formula::atom("q"); }
Formula r() { return Formula::atom("r"); }
} // namespace

TEST_CASE("parse respects precedence and associativity") {
    CHECK(parse("~p -> (~q | ~r)") == Formula::imp(Formula::neg(p()), Formula::disj(Formula::neg(q()), Formula::neg(r()))));
    CHECK(parse("p & q | r") == Formula::disj(Formula::conj(p(), q()), r()));
    CHECK(parse("p -> q -> r") == Formula::imp(p(), Formula::imp(q(), r())));
    CHECK(parse("p | q | r") == Formula::disj(p(), Formula::disj(q(), r())));
    CHECK(parse("p & q & r") == Formula::conj(p(), Formula::conj(q(), r())));
    CHECK(parse("~~p") == Formula::neg(Formula::neg(p())));
    CHECK(parse("  F|T  ") == Formula::disj(Formula::bot(), Formula::top()));
    CHECK(parse("(p -> q) -> r") == Formula::imp(Formula::imp(p(), q()), r()));
    CHECK(parse("x_1 & aB9") == Formula::conj(Formula::atom("x_1"), Formula::atom("aB9")));
}

TEST_CASE("render uses minimal parentheses") {
    CHECK(render(Formula::neg(p())) == "~p");
    CHECK(render(parse("~p -> (~q | ~r)")) == "~p -> ~q | ~r");
    CHECK(render(Formula::bot()) == "F");
    CHECK(render(Formula::top()) == "T");
    CHECK(render(parse("(p -> q) -> r")) == "(p -> q) -> r");
    CHECK(render(parse("p -> (q -> r)")) == "p -> q -> r");
    CHECK(render(parse("(p | q) | r")) == "(p | q) | r");
    CHECK(render(parse("(p | q) & r")) == "(p | q) & r");
    CHECK(render(parse("~(p & q)")) == "~(p & q)");
}

TEST_CASE("parse errors carry offset and expected tokens") {
    auto fails_at = [](const char* text, std::size_t offset) {
        try {
            parse(text);
        } catch (const ParseError& e) {
            CHECK(e.offset() == offset);
            CHECK(!e.expected().empty());
            return;
        }
        FAIL("no parse error for " << text);
    };
    fails_at("p &", 3);
    fails_at("", 0);
    fails_at("p q", 2);
    fails_at("(p", 2);
    fails_at("P", 0);
    fails_at("p -> ", 5);
    fails_at("p $ q", 2);
}

TEST_CASE("atom names are validated") {
    CHECK_THROWS_AS(Formula::atom("F"), std::invalid_argument);
    CHECK_THROWS_AS(Formula::atom("1p"), std::invalid_argument);
    CHECK_THROWS_AS(Formula::atom(""), std::invalid_argument);
    CHECK(is_identifier("p12_x"));
    CHECK(!is_identifier("Tp"));
}

TEST_CASE("atoms in first-occurrence order") {
    CHECK(atoms(parse("p & (q -> p)")) == std::vector<std::string>{"p", "q"});
    CHECK(atoms(parse("F")).empty());
    CHECK(atoms(parse("~~(r | p)")) == std::vector<std::string>{"r", "p"});
}

TEST_CASE("big_or and big_and") {
    std::vector<Formula> abc{Formula::atom("a"), Formula::atom("b"), Formula::atom("c")};
    CHECK(big_or(abc) == parse("a | (b | c)"));
    CHECK(big_and(abc) == parse("a & b & c"));
    CHECK(big_or(std::vector<Formula>{}) == parse("~T"));
    CHECK(big_and(std::vector<Formula>{}) == parse("~F"));
    CHECK(big_or(std::vector<Formula>{p()}) == p());
}

TEST_CASE("substitution") {
    log::set_level(log::Level::Silent);
    Substitution s;
    s.set("p", parse("~~a"));
    CHECK(apply_subst(s, parse("p & q")) == parse("~~a & ~T"));
    CHECK(apply_subst(Substitution{}, parse("~p")) == parse("~~T"));
    Substitution t;
    t.set("p", q());
    CHECK(apply_subst(t, parse("p -> p")) == parse("q -> q"));
    CHECK(apply_subst(t, parse("F | T")) == parse("F | T"));
    log::set_level(log::Level::Warning);
}

TEST_CASE("subformulas are distinct and children come first") {
    const auto subs = subformulas(parse("(p -> q) & (p -> q) | p"));
    CHECK(subs.size() == 5);
    CHECK(subs.back() == parse("(p -> q) & (p -> q) | p"));
    for (std::size_t i = 0; i < subs.size(); ++i)
        for (std::size_t j = i + 1; j < subs.size(); ++j) CHECK_FALSE(subs[i] == subs[j]);
}

TEST_CASE("size, depth and hashing") {
    const Formula f = parse("~p -> q & r");
    CHECK(f.size() == 6);
    CHECK(f.depth() == 2);
    CHECK(f.hash() == parse("~p -> q & r").hash());
    CHECK(FormulaHash{}(f) == f.hash());
}

TEST_CASE("round trip on random formulas") {
    RandomFormulaGenerator gen({"p", "q", "r", "s"}, 7);
    for (int i = 0; i < 1000; ++i) {
        const Formula f = gen(static_cast<std::size_t>(i % 7));
        REQUIRE(parse(render(f)) == f);
    }
}

TEST_CASE("substitution composes") {
    log::set_level(log::Level::Silent);
    RandomFormulaGenerator gen({"p", "q", "r"}, 11);
    for (int i = 0; i < 300; ++i) {
        Substitution s1, s2;
        s1.set("p", gen(2));
        s1.set("q", gen(2));
        s2.set("p", gen(2));
        s2.set("r", gen(2));
        const Formula f = gen(4);
        REQUIRE(apply_subst(s2, apply_subst(s1, f)) == apply_subst(s2.after(s1), f));

        std::set<std::string> allowed;
        for (const auto& a : atoms(f))
            for (const auto& b : atoms(s1(a))) allowed.insert(b);
        for (const auto& a : atoms(apply_subst(s1, f))) REQUIRE(allowed.count(a));
    }
    log::set_level(log::Level::Warning);
}

TEST_CASE("random generator is reproducible") {
    RandomFormulaGenerator a({"p", "q"}, 42), b({"p", "q"}, 42);
    for (int i = 0; i < 50; ++i) CHECK(a(5) == b(5));
    for (int i = 0; i < 200; ++i) {
        const auto x = a.uniform(3, 9);
        CHECK(x >= 3);
        CHECK(x <= 9);
    }
}
