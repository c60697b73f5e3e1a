// Acceptance run: one PASS/FAIL line per criterion with its wall-clock time.
// A criterion fails on any wrong result or when it overruns its time limit.
// Exit status is 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "corpus.hpp"
#include "mlogic/alpha.hpp"
#include "mlogic/ipc.hpp"
#include "mlogic/log.hpp"
#include "mlogic/kp.hpp"
#include "mlogic/search.hpp"
#include "mlogic/structural.hpp"
#include "oracles.hpp"

using namespace mlogic;

namespace {

// Collects failures for one criterion; the first few are printed.
struct Failures {
    std::vector<std::string> items;
    std::size_t checks = 0;
    std::string note;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) items.push_back(what);
    }
};

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;  // 0 means no limit
    std::function<void(Failures&)> body;
};

oracle::Model to_model(const Valuation& v) {
    oracle::Model m;
    for (const auto& [atom, set] : v.entries())
        for (World w : set.members()) m[atom].insert(w.mask);
    return m;
}

Valuation random_valuation(int n, const std::vector<std::string>& names, std::mt19937_64& rng) {
    Valuation v(n);
    for (const auto& a : names) v.set(a, random_upset(v.frame(), rng));
    return v;
}

const Formula kWeakKP = parse("(~p -> ~q | ~r) -> ((~p -> ~q) | (~p -> ~r))");
const Formula kKP = parse("(~p -> q | r) -> ((~p -> q) | (~p -> r))");

void rank_table(Failures& f) {
    std::ifstream in(MLOGIC_GOLDEN_DIR "/rank_table.txt");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        const Formula phi = parse(line.substr(0, tab));
        const std::string expected = line.substr(tab + 1);
        ++rows;
        f.expect(kp_rank(phi).str() == expected, line + " gave " + kp_rank(phi).str());
    }
    f.expect(rows == 50, "table has " + std::to_string(rows) + " rows");
}

void normal_form_facts(Failures& f) {
    oracle::FiniteRankGenerator gen({"p", "q", "r", "s", "t", "u"}, 2024);
    const std::uint64_t upsets3 = *upset_count(3);
    int exhaustive = 0;
    for (int i = 0; i < 100; ++i) {
        const Formula phi = gen(3, 64);
        const std::string text = render(phi);
        const auto expected = oracle::rank(phi);
        const Rank r = kp_rank(phi);
        f.expect(expected && r.is_finite() && r.value() == *expected, "rank of " + text);
        const NegDisjunction nd = kp_normalize(phi);
        f.expect(nd.bodies.size() == r.value(), "disjunct count of " + text);

        const Formula target = Formula::iff(phi, nd.formula());
        for (int n = 1; n <= 2; ++n)
            f.expect(valid_on(MedvedevFrame(n), target, CheckMode::exhaustive()).verdict == Verdict::Valid,
                     text + " on M_" + std::to_string(n));
        const double cost = std::pow(static_cast<double>(upsets3), static_cast<double>(atoms(target).size()));
        const CheckMode mode = cost <= 1e7 ? CheckMode::exhaustive() : CheckMode::sample(1000, 77);
        exhaustive += mode.kind == SearchMode::Exhaustive;
        f.expect(valid_on(MedvedevFrame(3), target, mode).verdict != Verdict::Refuted, text + " on M_3");
    }
    f.note = "M_3: " + std::to_string(exhaustive) + " exhaustive, " + std::to_string(100 - exhaustive) + " sampled";
}

void alpha_conditions(Failures& f) {
    for (int n = 1; n <= 8; ++n) {
        const AlphaFamily fam(n);
        const auto ip = check_alpha_provability(fam, ProofRoute::Intuitionistic);
        const auto cl = check_alpha_provability(fam, ProofRoute::Classical);
        f.expect(ip.ok(), "ipc route, n = " + std::to_string(n));
        f.expect(cl.ok(), "classical route, n = " + std::to_string(n));
        std::vector<Formula> conditions{Formula::neg(Formula::neg(big_or(fam.formulas())))};
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) conditions.push_back(Formula::neg(Formula::conj(fam.at(i), fam.at(j))));
        for (const auto& c : conditions)
            f.expect(ipc_provable(c) == classically_valid(c), "Glivenko disagreement on " + render(c));
    }
    for (int n = 1; n <= 5; ++n) {
        const UniversalValuation u = u_valuation(n);
        f.expect(check_separation(u, true).ok(), "separation, n = " + std::to_string(n));
        const auto model = to_model(u.valuation());
        for (World J : MedvedevFrame(n).worlds()) {
            const auto truth = oracle::truth(n, model, alpha_I(u.family(), J));
            for (World I : MedvedevFrame(n).worlds())
                f.expect((truth.count(I.mask) == 1) == ((I.mask & ~J.mask) == 0),
                         "membership " + to_string(I) + " / " + to_string(J));
        }
    }
}

void universal_lemma(Failures& f) {
    std::mt19937_64 rng(4001);
    RandomFormulaGenerator gen({"p", "q", "r"}, 4003);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 4;
        const Valuation v = random_valuation(n, {"p", "q", "r"}, rng);
        const Formula phi = gen(6);
        const UniversalValuation u = u_valuation(n);
        const auto rep = verify_lemma(u, v, {phi});
        f.expect(rep.ok() && rep.formulas_checked == 1, "agreement on M_" + std::to_string(n) + " for " + render(phi));
    }
}

void axiom_validity(Failures& f) {
    for (const Formula* ax : {&kWeakKP, &kKP}) {
        for (int n = 2; n <= 3; ++n) {
            const auto r = valid_on(MedvedevFrame(n), *ax, CheckMode::exhaustive());
            f.expect(r.verdict == Verdict::Valid, render(*ax) + " exhaustive on M_" + std::to_string(n));
        }
        f.expect(valid_on(MedvedevFrame(3), *ax, CheckMode::exhaustive()).valuations_checked == 19 * 19 * 19,
                 "M_3 valuation count");
        for (int n = 4; n <= 5; ++n) {
            const auto r = valid_on(MedvedevFrame(n), *ax, CheckMode::sample(10000, 5000 + n));
            f.expect(r.verdict == Verdict::NoCounterexampleFound && r.valuations_checked == 10000,
                     render(*ax) + " sampled on M_" + std::to_string(n));
        }
    }
}

void disjunction_property(Failures& f) {
    const auto left = refute(parse("~p"), 1);
    const auto right = refute(parse("~~p"), 1);
    f.expect(left && right, "both disjuncts refuted on M_1");
    if (!left || !right) return;
    const RefutationWitness w = dp_countermodel(*left, *right);
    f.expect(w.n() == 2, "frame M_2");
    f.expect(w.world() == World::of({1, 2}), "bottom world");
    f.expect(w.formula() == parse("~p | ~~p"), "formula");
    f.expect(w.valuation().at("p").members() == std::vector<World>{World::of({1})}, "v(p) = up-set of /\\{1}");
    f.expect(!oracle::forces(2, to_model(w.valuation()), 3, w.formula()), "oracle refutes at the bottom");
}

void structural_pipeline(Failures& f) {
    const auto w = admissibility_witness(parse("p | q"), parse("p"), 2);
    f.expect(w.has_value(), "witness for p | q / p");
    if (w) {
        const UniversalValuation u = u_valuation(w->k);
        const Formula sc = apply_subst(w->sigma, w->conclusion);
        f.expect(!forces(u.valuation(), MedvedevFrame(w->k).bottom(), sc), "sigma(psi) refuted under u_k");
        f.expect(!oracle::forces(w->k, to_model(u.valuation()), oracle::full(w->k), sc), "oracle agrees");
        const Formula sp = apply_subst(w->sigma, w->premise);
        for (int n = 1; n <= 4; ++n)
            f.expect(valid_on(MedvedevFrame(n), sp, CheckMode::exhaustive()).verdict == Verdict::Valid,
                     "sigma(phi) on M_" + std::to_string(n));
    }
    f.expect(!admissibility_witness(parse("p"), parse("p"), 3), "p / p has no witness");
    f.expect(!admissibility_witness(parse("~p -> q | r"), parse("(~p -> q) | (~p -> r)"), 3),
             "KP rule has no witness");
}

void pmorphism_laws(Failures& f) {
    std::mt19937_64 rng(8008);
    const std::vector<Formula> rule{parse("p | q"), parse("p")};
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            const UniversalValuation u = u_valuation(n);
            for (int trial = 0; trial < 50; ++trial) {
                const std::string tag = "m=" + std::to_string(m) + " n=" + std::to_string(n) + " #" + std::to_string(trial);
                const Valuation w = random_valuation(m, u.family().atom_names(), rng);
                const PMorphism fm = alpha_pmorphism(m, n, w);
                f.expect(check_pmorphism(fm).ok(), "check_pmorphism " + tag);
                f.expect(alpha_transfer_check(fm, u, w).ok(), "alpha transfer " + tag);
                const Valuation v = random_valuation(n, {"p", "q"}, rng);
                const Substitution sigma = universal_subst(u.family(), v);
                auto chis = default_transfer_formulas(rule, rng(), 100);
                const auto rep = transfer_check(fm, sigma, u, w, chis);
                f.expect(rep.ok() && rep.formulas_checked >= 100, "transfer " + tag);
            }
        }
}

void oracle_cross_checks(Failures& f) {
    const std::uint64_t expected[] = {0, 0, 5, 19, 167};
    // Monotone Boolean functions on n variables; one more than the up-sets of M_n.
    const std::uint64_t monotone[] = {0, 0, 6, 20, 168};
    for (int n = 2; n <= 4; ++n) {
        const auto ups = enumerate_upsets(MedvedevFrame(n));
        const auto naive = oracle::all_upsets(n);
        f.expect(ups.size() == expected[n] && naive.size() == expected[n] && ups.size() + 1 == monotone[n],
                 "up-set count on M_" + std::to_string(n));
        std::set<oracle::Masks> a(naive.begin(), naive.end()), b;
        for (const auto& s : ups) {
            oracle::Masks m;
            for (World w : s.members()) m.insert(w.mask);
            b.insert(m);
        }
        f.expect(a == b, "same up-sets on M_" + std::to_string(n));
    }
    RandomFormulaGenerator gen({"p", "q", "r"}, 9009);
    for (int i = 0; i < 500; ++i) {
        const Formula g = Formula::neg(gen(4));
        f.expect(ipc_provable(g) == classically_valid(g), "Glivenko on " + render(g));
    }
    for (const auto& e : load_corpus(MLOGIC_GOLDEN_DIR "/ipc_corpus.txt")) {
        if (!ipc_provable(e.formula)) continue;
        f.expect(valid_on(MedvedevFrame(3), e.formula, CheckMode::exhaustive()).verdict == Verdict::Valid,
                 "corpus " + render(e.formula));
    }
}

void levin(Failures& f) {
    const auto d = levin_decomposition(parse("p | ~p"), 2);
    f.expect(d.has_value(), "decomposition found");
    if (!d) return;
    f.expect(d->bodies.size() == 2, "k = 2");
    f.expect(d->countermodels.size() == d->bodies.size(), "one countermodel per body");
    for (std::size_t i = 0; i < d->bodies.size() && i < d->countermodels.size(); ++i) {
        std::map<std::string, bool> a(d->countermodels[i].begin(), d->countermodels[i].end());
        f.expect(oracle::classical(d->bodies[i], a), "countermodel " + std::to_string(i + 1));
    }
    const Formula nf = kp_normalize(d->sigma_formula).formula();
    for (int n = 1; n <= 3; ++n)
        f.expect(valid_on(MedvedevFrame(n), Formula::iff(d->sigma_formula, nf), CheckMode::exhaustive()).verdict ==
                     Verdict::Valid,
                 "equivalence on M_" + std::to_string(n));
}

} // namespace

int main() {
    log::set_level(log::Level::Silent);
    const std::vector<Criterion> criteria = {
        {1, "rank golden table", 1, rank_table},
        {2, "normal form facts on random finite-rank formulas", 120, normal_form_facts},
        {3, "alpha family conditions", 60, alpha_conditions},
        {4, "truth sets under v and under u_n after substitution", 60, universal_lemma},
        {5, "weak KP and KP validity", 120, axiom_validity},
        {6, "disjunction property countermodel", 0, disjunction_property},
        {7, "admissibility pipeline", 0, structural_pipeline},
        {8, "p-morphism laws", 180, pmorphism_laws},
        {9, "oracle cross-checks", 0, oracle_cross_checks},
        {10, "Levin decomposition", 0, levin},
    };
    bool all = true;
    for (const auto& c : criteria) {
        Failures f;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(f);
        } catch (const std::exception& e) {
            f.items.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool late = c.limit_seconds > 0 && secs > c.limit_seconds;
        const bool pass = f.items.empty() && !late;
        all = all && pass;
        std::ostringstream line;
        line << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(2)
             << secs << " s";
        if (c.limit_seconds > 0) line << ", limit " << c.limit_seconds << " s";
        line << ", " << f.checks << " checks) " << c.title;
        if (!f.note.empty()) line << " [" << f.note << "]";
        std::cout << line.str() << '\n';
        if (late) std::cout << "    over the time limit\n";
        for (std::size_t i = 0; i < f.items.size() && i < 5; ++i) std::cout << "    " << f.items[i] << '\n';
        if (f.items.size() > 5) std::cout << "    ... " << f.items.size() - 5 << " more\n";
    }
    std::cout << (all ? "all criteria passed" : "some criteria failed") << '\n';
    return all ? 0 : 1;
}
