#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "mlogic/errors.hpp"
#include "mlogic/ipc.hpp"
#include "oracles.hpp"

using namespace mlogic;

TEST_CASE("prover examples") {
    CHECK(ipc_provable(parse("p -> p")));
    CHECK_FALSE(ipc_provable(parse("p | ~p")));
    CHECK(ipc_provable(parse("~(p & ~p)")));
    CHECK(ipc_provable(parse("T")));
    CHECK_FALSE(ipc_provable(parse("F")));
}

TEST_CASE("classical examples") {
    CHECK(classically_valid(parse("p | ~p")));
    CHECK(classically_valid(parse("~(p & ~p)")));
    CHECK_FALSE(classically_valid(parse("~p")));
    const auto cm = classical_countermodel(parse("~p"));
    REQUIRE(cm);
    CHECK(*cm == Assignment{{"p", true}});
    CHECK_FALSE(classical_countermodel(parse("p -> p")));
    // First falsifying row, first atom as low bit.
    CHECK(*classical_countermodel(parse("p | q")) == Assignment{{"p", false}, {"q", false}});
    CHECK(*classical_countermodel(parse("p -> q")) == Assignment{{"p", true}, {"q", false}});
}

TEST_CASE("labelled corpus") {
    for (const auto& e : load_corpus(MLOGIC_GOLDEN_DIR "/ipc_corpus.txt")) {
        INFO(render(e.formula));
        CHECK(ipc_provable(e.formula) == (e.label == "ipc"));
        CHECK(classically_valid(e.formula) == (e.label != "invalid"));
        CHECK(oracle::tautology(e.formula) == (e.label != "invalid"));
    }
}

TEST_CASE("budget and atom limits") {
    ProverStats stats;
    CHECK(ipc_provable(parse("(p -> q) & (q -> r) -> p -> r"), {}, &stats));
    CHECK(stats.expansions > 0);
    const Formula hard = parse("((((p -> q) -> p) -> p) -> q) -> q | ((p -> r) -> s) | ~~(t | ~t)");
    CHECK_THROWS_AS(ipc_provable(hard, {2}), BudgetExceeded);

    std::vector<Formula> many;
    for (int i = 0; i < 21; ++i) many.push_back(Formula::atom("x" + std::to_string(i)));
    const Formula wide = big_or(many);
    CHECK_THROWS_AS(classically_valid(wide), BudgetExceeded);
    CHECK_FALSE(classically_valid(wide, {21}));
}

TEST_CASE("classical oracle agrees with truth tables") {
    RandomFormulaGenerator gen({"p", "q", "r", "s"}, 3);
    for (int i = 0; i < 500; ++i) {
        const Formula f = gen(5);
        INFO(render(f));
        REQUIRE(classically_valid(f) == oracle::tautology(f));
        if (auto cm = classical_countermodel(f)) {
            std::map<std::string, bool> a(cm->begin(), cm->end());
            REQUIRE_FALSE(oracle::classical(f, a));
            REQUIRE_FALSE(evaluate_classically(f, *cm));
        }
    }
}

TEST_CASE("negated formulas: intuitionistic and classical provability agree") {
    RandomFormulaGenerator gen({"p", "q", "r"}, 5);
    for (int i = 0; i < 500; ++i) {
        const Formula f = Formula::neg(gen(4));
        INFO(render(f));
        REQUIRE(ipc_provable(f) == classically_valid(f));
    }
}

TEST_CASE("intuitionistic theorems hold on small Medvedev frames") {
    RandomFormulaGenerator gen({"p", "q"}, 9);
    int provable = 0;
    for (int i = 0; i < 400; ++i) {
        const Formula f = gen(4);
        if (!ipc_provable(f)) continue;
        ++provable;
        INFO(render(f));
        REQUIRE(oracle::valid(2, f));
        REQUIRE(oracle::tautology(f));
    }
    CHECK(provable > 10);
}

TEST_CASE("provability is closed under substitution") {
    RandomFormulaGenerator gen({"p", "q", "r"}, 13);
    const auto corpus = load_corpus(MLOGIC_GOLDEN_DIR "/ipc_corpus.txt");
    for (int i = 0; i < 100; ++i) {
        Substitution s;
        s.set("p", gen(2));
        s.set("q", gen(2));
        s.set("r", gen(2));
        for (const auto& e : corpus)
            if (e.label == "ipc") REQUIRE(ipc_provable(apply_subst(s, e.formula)));
    }
}
