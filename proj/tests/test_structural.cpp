#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlogic/errors.hpp"
#include "mlogic/json_io.hpp"
#include "mlogic/structural.hpp"
#include "oracles.hpp"

using namespace mlogic;

namespace {

oracle::Model to_model(const Valuation& v) {
    oracle::Model m;
    for (const auto& [atom, set] : v.entries()) {
        auto& s = m[atom];
        for (World w : set.members()) s.insert(w.mask);
    }
    return m;
}

Valuation random_valuation(int n, const std::vector<std::string>& names, std::mt19937_64& rng) {
    Valuation v(n);
    for (const auto& a : names) v.set(a, random_upset(v.frame(), rng));
    return v;
}

// Brute-force p-morphism test straight from the definition.
bool naive_pmorphism(const PMorphism& f) {
    const std::uint32_t src = oracle::full(f.source);
    const std::uint32_t dst = oracle::full(f.target);
    for (std::uint32_t x = 1; x <= src; ++x) {
        for (std::uint32_t x2 = 1; x2 <= src; ++x2)
            if (oracle::above(x, x2) && !oracle::above(f.image[x], f.image[x2])) return false;
        for (std::uint32_t y = 1; y <= dst; ++y) {
            if (!oracle::above(f.image[x], y)) continue;
            bool lifted = false;
            for (std::uint32_t x2 = 1; x2 <= src && !lifted; ++x2) lifted = oracle::above(x, x2) && f.image[x2] == y;
            if (!lifted) return false;
        }
    }
    return true;
}

const Formula kKP = parse("(~p -> q | r) -> ((~p -> q) | (~p -> r))");

} // namespace

TEST_CASE("levin decomposition of p | ~p") {
    const auto d = levin_decomposition(parse("p | ~p"), 2);
    REQUIRE(d);
    CHECK(d->n() == 2);
    CHECK(d->v().at("p").members() == std::vector<World>{World::of({1})});
    CHECK(d->sigma(std::string("p")) == parse("~~p1"));
    CHECK(d->sigma_formula == parse("~~p1 | ~~~p1"));
    CHECK(d->bodies == std::vector<Formula>{parse("~p1"), parse("~~p1")});
    REQUIRE(d->countermodels.size() == 2);
    CHECK(d->countermodels[0] == Assignment{{"p1", false}});
    CHECK(d->countermodels[1] == Assignment{{"p1", true}});
    REQUIRE(d->equivalence.size() == 3);
    for (const auto& c : d->equivalence) {
        CHECK(c.verdict == Verdict::Valid);
        CHECK(c.mode == SearchMode::Exhaustive);
    }
}

TEST_CASE("levin decomposition invariants") {
    CHECK_FALSE(levin_decomposition(kKP, 4));
    CHECK_FALSE(levin_decomposition(parse("p -> p"), 3));
    const auto d = levin_decomposition(parse("~p | ~~p"), 3);
    REQUIRE(d);
    CHECK(d->n() == 2);
    CHECK(d->bodies.size() == 2);

    for (const char* text : {"p | ~p", "~p | ~~p", "(p -> q) | (q -> p)", "~~p -> p", "(~p -> q | r) -> (~p -> q) | r"}) {
        const auto dec = levin_decomposition(parse(text), 3);
        REQUIRE(dec);
        INFO(text);
        CHECK(oracle::rank(dec->sigma_formula) == dec->bodies.size());
        for (std::size_t i = 0; i < dec->bodies.size(); ++i) {
            std::map<std::string, bool> a(dec->countermodels[i].begin(), dec->countermodels[i].end());
            CHECK(oracle::classical(dec->bodies[i], a));
        }
        const Formula nf = kp_normalize(dec->sigma_formula).formula();
        CHECK(oracle::valid(1, Formula::iff(dec->sigma_formula, nf)));
        CHECK(oracle::valid(2, Formula::iff(dec->sigma_formula, nf)));
        // The refuting world of the source stays refuted after substitution.
        const UniversalValuation u = u_valuation(dec->n());
        CHECK_FALSE(forces(u.valuation(), dec->refutation.world(), dec->sigma_formula));
    }
}

TEST_CASE("admissibility witness for p | q / p") {
    const auto w = admissibility_witness(parse("p | q"), parse("p"), 2);
    REQUIRE(w);
    CHECK(w->k == 1);
    CHECK(w->v.at("p") == UpSet::empty(1));
    CHECK(w->v.at("q") == UpSet::all(1));
    CHECK(w->sigma(std::string("p")) == parse("~T"));
    CHECK(w->sigma(std::string("q")) == parse("~~T"));
    CHECK(w->refutation.formula() == parse("~T"));
    REQUIRE(w->validity_evidence.size() == 4);
    for (const auto& c : w->validity_evidence) CHECK(c.verdict == Verdict::Valid);
    CHECK(apply_subst(w->sigma, w->premise) == parse("~T | ~~T"));
}

TEST_CASE("admissibility witness for T / p | ~p") {
    const auto w = admissibility_witness(parse("T"), parse("p | ~p"), 3);
    REQUIRE(w);
    CHECK(w->found_n == 2);
    CHECK(w->k == 2);
    CHECK(w->sigma(std::string("p")) == parse("~~p1"));
}

TEST_CASE("no witness for derivable rules") {
    CHECK_FALSE(admissibility_witness(parse("p"), parse("p"), 3));
    CHECK_FALSE(admissibility_witness(parse("p & (p -> q)"), parse("q"), 3));
    CHECK_FALSE(admissibility_witness(parse("~p -> q | r"), parse("(~p -> q) | (~p -> r)"), 3));
    CHECK_FALSE(admissibility_witness(parse("p & q"), parse("q & p"), 3));
}

TEST_CASE("random rules against the oracle") {
    RandomFormulaGenerator gen({"p", "q"}, 67);
    StructuralBounds b;
    b.validity_bound = 2;
    int found = 0, none = 0;
    for (int i = 0; i < 150; ++i) {
        const Formula phi = gen(2);
        const Formula psi = gen(2);
        INFO(render(phi) << " / " << render(psi));
        const auto w = admissibility_witness(phi, psi, 3, b);
        if (!w) {
            ++none;
            for (int n = 1; n <= 3; ++n) REQUIRE(oracle::valid(n, Formula::imp(phi, psi)));
            continue;
        }
        ++found;
        const auto vm = to_model(w->v);
        REQUIRE(oracle::truth(w->k, vm, phi).size() == oracle::full(w->k));
        REQUIRE_FALSE(oracle::forces(w->k, vm, oracle::full(w->k), psi));
        const UniversalValuation u = u_valuation(w->k);
        REQUIRE_FALSE(oracle::forces(w->k, to_model(u.valuation()), oracle::full(w->k), apply_subst(w->sigma, psi)));
        const Formula sphi = apply_subst(w->sigma, phi);
        REQUIRE(oracle::valid(1, sphi));
        REQUIRE(oracle::valid(2, sphi));
    }
    CHECK(found > 10);
    CHECK(none > 10);
}

TEST_CASE("p-morphism checks") {
    PMorphism id{3, 3, {}};
    id.image.resize(8);
    for (std::uint32_t x = 1; x < 8; ++x) id.image[x] = x;
    CHECK(check_pmorphism(id).ok());

    const PMorphism constant{2, 1, {0, 1, 1, 1}};
    CHECK(check_pmorphism(constant).ok());

    // /\{1} <= ... swapped: the bottom goes to a maximal world and a maximal
    // world goes to the bottom.
    const PMorphism swapped{2, 2, {0, 3, 2, 1}};
    const auto r = check_pmorphism(swapped);
    CHECK_FALSE(r.monotone);
    CHECK(r.violation.find("<=") != std::string::npos);

    const PMorphism no_back{1, 2, {0, 3}};
    const auto rb = check_pmorphism(no_back);
    CHECK(rb.monotone);
    CHECK_FALSE(rb.back_condition);

    const PMorphism short_map{2, 2, {0, 1}};
    CHECK_FALSE(check_pmorphism(short_map).well_formed);
    const PMorphism outside{1, 1, {0, 2}};
    CHECK_FALSE(check_pmorphism(outside).well_formed);

    CHECK(PMorphism::from_maximal(2, 3, {3, 1}).image == std::vector<std::uint32_t>{0, 4, 1, 5});
    CHECK_THROWS_AS(PMorphism::from_maximal(2, 3, {4, 1}), std::invalid_argument);
}

TEST_CASE("alpha p-morphisms") {
    for (int n = 1; n <= 4; ++n) {
        const UniversalValuation u = u_valuation(n);
        const PMorphism f = alpha_pmorphism(n, n, u.valuation());
        for (std::uint32_t x = 1; x < f.image.size(); ++x) CHECK(f.image[x] == x);
    }
    Valuation w(2);
    w.set("p1", UpSet::all(2));
    const PMorphism f = alpha_pmorphism(2, 2, w);
    CHECK(f(World::of({1})) == World::of({1}));
    CHECK(f(World::of({2})) == World::of({1}));
    CHECK(f(World::of({1, 2})) == World::of({1}));
    CHECK_THROWS_AS(alpha_pmorphism(2, 2, Valuation(2)), std::out_of_range);
}

TEST_CASE("alpha p-morphisms on random valuations") {
    std::mt19937_64 rng(71);
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            const UniversalValuation u = u_valuation(n);
            for (int trial = 0; trial < 10; ++trial) {
                const Valuation w = random_valuation(m, u.family().atom_names(), rng);
                const PMorphism f = alpha_pmorphism(m, n, w);
                REQUIRE(naive_pmorphism(f));
                REQUIRE(alpha_transfer_check(f, u, w).ok());

                const Valuation v = random_valuation(n, {"p", "q"}, rng);
                const Substitution sigma = universal_subst(u.family(), v);
                const auto chis = default_transfer_formulas({parse("p | q"), parse("p")}, 73 + static_cast<std::uint64_t>(trial), 20);
                const auto rep = transfer_check(f, sigma, u, w, chis);
                REQUIRE(rep.ok());
                CHECK(rep.formulas_checked == chis.size());
            }
        }
}

TEST_CASE("transfer check basics") {
    const UniversalValuation u = u_valuation(2);
    Valuation w(3);
    WorldSet s(3);
    s.set(World::of({1}));
    s.set(World::of({3}));
    w.set("p1", UpSet::closure(s));
    const PMorphism f = alpha_pmorphism(3, 2, w);
    Valuation v(2);
    v.set("p", UpSet::all(2));
    const Substitution sigma = universal_subst(u.family(), v);
    CHECK(transfer_check(f, sigma, u, w, {parse("p"), parse("T")}).ok());
    CHECK_THROWS_AS(transfer_check(f, sigma, u_valuation(3), w, {parse("p")}), std::invalid_argument);

    // A map that is not the alpha map breaks the law.
    const PMorphism wrong = PMorphism::from_maximal(3, 2, {2, 2, 2});
    CHECK_FALSE(alpha_transfer_check(wrong, u, w).ok());
}

TEST_CASE("default transfer formulas") {
    const auto fs = default_transfer_formulas({parse("p | q"), parse("p")}, 5);
    CHECK(fs.size() == 3 + 100);
    CHECK(fs[0] == parse("p"));
    CHECK(fs[2] == parse("p | q"));
    CHECK(default_transfer_formulas({parse("T")}, 5, 3).size() == 4);
}

TEST_CASE("witness JSON round trip") {
    const auto w = refute(parse("p | ~p"), 3);
    REQUIRE(w);
    const Json j = witness_to_json(*w);
    CHECK(j.dump() == R"({"n":2,"valuation":{"p":[[1]]},"world":[1,2],"formula":"p | ~p"})");
    const RefutationWitness back = witness_from_json(j);
    CHECK(back.valuation() == w->valuation());
    CHECK(back.world() == w->world());
    CHECK(back.formula() == w->formula());
}

TEST_CASE("witness JSON validation") {
    auto reject = [](const char* text) {
        CHECK_THROWS_AS(witness_from_json(Json::parse(text)), std::invalid_argument);
    };
    reject(R"({"n":2,"valuation":{"p":[[1,2]]},"world":[1,2],"formula":"p"})");
    reject(R"({"n":2,"valuation":{"p":[[1]]},"world":[1],"formula":"p"})");
    reject(R"({"n":2,"valuation":{"p":[[3]]},"world":[1,2],"formula":"p"})");
    reject(R"({"n":2,"valuation":{"p":[[2,1]]},"world":[1,2],"formula":"p"})");
    reject(R"({"n":2,"valuation":{"P":[]},"world":[1,2],"formula":"p"})");
    reject(R"({"valuation":{},"world":[1],"formula":"p"})");
    reject(R"({"n":2,"valuation":{},"world":[],"formula":"p"})");
    CHECK_THROWS_AS(witness_from_json(Json::parse(R"({"n":1,"valuation":{},"world":[1],"formula":"p &"})")),
                    ParseError);
}

TEST_CASE("p-morphism JSON") {
    const PMorphism f = PMorphism::from_maximal(2, 2, {1, 1});
    const Json j = pmorphism_to_json(f);
    CHECK(pmorphism_from_json(j).image == f.image);
    const Json maximal_only = Json::parse(
        R"({"source":2,"target":3,"map":[{"world":[1],"image":[3]},{"world":[2],"image":[1]}]})");
    CHECK(pmorphism_from_json(maximal_only).image == std::vector<std::uint32_t>{0, 4, 1, 5});
    CHECK_THROWS_AS(pmorphism_from_json(Json::parse(R"({"source":2,"target":2,"map":[{"world":[1],"image":[1]}]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        pmorphism_from_json(Json::parse(
            R"({"source":1,"target":1,"map":[{"world":[1],"image":[1]},{"world":[1],"image":[1]}]})")),
        std::invalid_argument);
}

TEST_CASE("certificate JSON carries the extension fields") {
    const auto d = levin_decomposition(parse("p | ~p"), 2);
    REQUIRE(d);
    const Json j = levin_to_json(*d);
    CHECK(j["sigma"]["p"] == "~~p1");
    CHECK(j["bodies"] == Json::parse(R"(["~p1","~~p1"])"));
    CHECK(j["countermodels"] == Json::parse(R"([{"p1":false},{"p1":true}])"));
    CHECK(witness_from_json(j).n() == 2);

    const auto a = admissibility_witness(parse("p | q"), parse("p"), 2);
    REQUIRE(a);
    const Json ja = admissibility_to_json(*a);
    CHECK(ja["sigma"]["q"] == "~~T");
    CHECK(ja["refutation"]["formula"] == "~T");
    CHECK(witness_from_json(ja).formula() == parse("p"));
    CHECK(witness_from_json(ja["refutation"]).n() == 1);
}
