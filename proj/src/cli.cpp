#include "mlogic/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <sstream>

#include "mlogic/alpha.hpp"
#include "mlogic/errors.hpp"
#include "mlogic/ipc.hpp"
#include "mlogic/json_io.hpp"
#include "mlogic/kp.hpp"
#include "mlogic/log.hpp"
#include "mlogic/search.hpp"
#include "mlogic/structural.hpp"

namespace mlogic::cli {

namespace {

struct Globals {
    bool json = false;
    std::uint64_t seed = 0;
    std::string file;
    bool verbose = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Formula formula_arg(const std::string& text, const Globals& g) {
    if (!text.empty() && !g.file.empty()) throw UsageError("give the formula either inline or with --file, not both");
    if (!g.file.empty()) return parse(slurp(g.file));
    if (text.empty()) throw UsageError("missing formula argument");
    return parse(text);
}

void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

std::string assignment_text(const Assignment& a) {
    std::string s;
    for (const auto& [atom, value] : a) {
        if (!s.empty()) s += ", ";
        s += atom + "=" + (value ? "true" : "false");
    }
    return s.empty() ? "(no atoms)" : s;
}

std::string check_text(const FrameCheck& c) {
    return "M_" + std::to_string(c.n) + ": " + to_string(c.verdict) + " (" + to_string(c.mode) + ", " +
           std::to_string(c.valuations) + " valuations)";
}

void require_range(const char* flag, int value, int lo, int hi) {
    if (value < lo || value > hi)
        throw UsageError(std::string(flag) + " must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_parse(const Formula& f, const Globals& g, std::ostream& out) {
    if (g.json) {
        Json j;
        j["formula"] = render(f);
        j["atoms"] = atoms(f);
        j["size"] = f.size();
        j["depth"] = f.depth();
        print(out, j);
    } else {
        out << render(f) << "\n";
    }
    return kEstablished;
}

int cmd_rank(const Formula& f, const Globals& g, std::ostream& out) {
    const Rank r = kp_rank(f);
    if (g.json) {
        Json j;
        j["formula"] = render(f);
        if (r.is_finite())
            j["rank"] = r.value();
        else
            j["rank"] = "inf";
        print(out, j);
    } else {
        out << r.str() << "\n";
    }
    return kEstablished;
}

int cmd_normalize(const Formula& f, int verify_bound, const Globals& g, std::ostream& out) {
    if (!kp_rank(f).is_finite()) throw UsageError("formula has infinite Kreisel-Putnam rank");
    const NegDisjunction nd = kp_normalize(f);
    std::optional<NormalFormReport> report;
    if (verify_bound > 0) {
        VerifyOptions opts;
        opts.seed = g.seed;
        report = verify_normal_form(f, nd, verify_bound, opts);
    }
    const int code = report && !report->ok ? kRefuted : kEstablished;

    if (g.json) {
        Json j;
        j["formula"] = render(f);
        j["rank"] = nd.bodies.size();
        Json bodies = Json::array();
        for (const auto& b : nd.bodies) bodies.push_back(render(b));
        j["bodies"] = std::move(bodies);
        j["normal_form"] = render(nd.formula());
        if (report) {
            Json r;
            std::vector<FrameCheck> frames = report->frames;
            r["frames"] = frame_checks_to_json(frames);
            Json steps = Json::array();
            for (const auto& s : report->steps)
                steps.push_back(Json{{"source", s.source}, {"status", to_string(s.status)}});
            r["steps"] = std::move(steps);
            r["needs_weak_kp"] = report->needs_weak_kp();
            r["constant_convention"] = report->constant_rank_convention;
            r["ok"] = report->ok;
            r["failures"] = report->failures;
            j["verification"] = std::move(r);
        }
        print(out, j);
        return code;
    }

    out << "rank: " << nd.bodies.size() << "\n";
    out << "normal form: " << render(nd.formula()) << "\n";
    for (std::size_t i = 0; i < nd.bodies.size(); ++i) out << "body " << i + 1 << ": " << render(nd.bodies[i]) << "\n";
    if (report) {
        for (const auto& c : report->frames) out << check_text(c) << "\n";
        for (const auto& s : report->steps) out << "step [" << to_string(s.status) << "] " << s.source << "\n";
        if (report->constant_rank_convention) out << "note: F and T are ranked as ~T and ~F\n";
        for (const auto& msg : report->failures) out << "failure: " << msg << "\n";
        out << "verification: " << (report->ok ? "ok" : "failed") << "\n";
    }
    return code;
}

int cmd_prove_ipc(const Formula& f, std::uint64_t budget, const Globals& g, std::ostream& out) {
    ProverStats stats;
    std::string result;
    int code;
    try {
        const bool ok = ipc_provable(f, {budget}, &stats);
        result = ok ? "provable" : "unprovable";
        code = ok ? kEstablished : kRefuted;
    } catch (const BudgetExceeded&) {
        result = "unknown";
        code = kInconclusive;
    }
    if (g.json) {
        print(out, Json{{"formula", render(f)}, {"result", result}, {"expansions", stats.expansions}});
    } else {
        out << result;
        if (code == kInconclusive) out << " (search budget of " << budget << " expansions exhausted)";
        out << "\n";
    }
    return code;
}

int cmd_prove_cl(const Formula& f, const Globals& g, std::ostream& out) {
    const auto cm = classical_countermodel(f);
    if (g.json) {
        Json j{{"formula", render(f)}, {"result", cm ? "invalid" : "valid"}};
        if (cm) j["countermodel"] = assignment_to_json(*cm);
        print(out, j);
    } else {
        out << (cm ? "invalid" : "valid") << "\n";
        if (cm) out << "countermodel: " << assignment_text(*cm) << "\n";
    }
    return cm ? kRefuted : kEstablished;
}

int cmd_check(const Formula& f, int n, const std::string& mode, std::size_t count, const Globals& g,
              std::ostream& out) {
    require_range("--n", n, 1, MedvedevFrame::max_generators);
    const CheckMode cm = mode == "sample" ? CheckMode::sample(count, g.seed) : CheckMode::exhaustive();
    const ValidityResult r = valid_on(MedvedevFrame(n), f, cm);
    if (g.json) {
        Json j{{"formula", render(f)},
               {"n", n},
               {"mode", to_string(r.mode)},
               {"verdict", to_string(r.verdict)},
               {"valuations", r.valuations_checked}};
        if (r.witness) j["witness"] = witness_to_json(*r.witness);
        print(out, j);
    } else if (r.witness) {
        out << "refuted on M_" << n << "\n";
        print(out, witness_to_json(*r.witness));
    } else {
        out << to_string(r.verdict) << " on M_" << n << " (" << to_string(r.mode) << ", " << r.valuations_checked
            << " valuations)\n";
    }
    switch (r.verdict) {
    case Verdict::Valid: return kEstablished;
    case Verdict::Refuted: return kRefuted;
    case Verdict::NoCounterexampleFound: return kInconclusive;
    }
    return kInconclusive;
}

RefuteOptions refute_options(const std::string& mode, std::size_t count, const Globals& g) {
    RefuteOptions o;
    o.strategy = mode == "exhaustive" ? RefuteStrategy::ExhaustiveOnly
                 : mode == "sample"   ? RefuteStrategy::SampleOnly
                                      : RefuteStrategy::Auto;
    o.sample_count = count;
    o.seed = g.seed;
    return o;
}

int inconclusive(std::ostream& out, const Globals& g, const std::string& what, int max_n) {
    if (g.json)
        print(out, Json{{"result", "inconclusive"}, {"max_n", max_n}});
    else
        out << what << " up to M_" << max_n << "\n";
    return kInconclusive;
}

int cmd_refute(const Formula& f, int max_n, const std::string& mode, std::size_t count, const Globals& g,
               std::ostream& out) {
    require_range("--max-n", max_n, 1, MedvedevFrame::max_generators);
    const auto w = refute(f, max_n, refute_options(mode, count, g));
    if (!w) return inconclusive(out, g, "no counterexample found", max_n);
    print(out, witness_to_json(*w));
    return kRefuted;
}

int cmd_alpha(int n, const Globals& g, std::ostream& out) {
    require_range("--n", n, 1, MedvedevFrame::max_generators);
    const UniversalValuation u = u_valuation(n);
    const AlphaFamily& fam = u.family();
    // The prover is only asked for the small families; the pairwise checks
    // grow quadratically.
    const bool with_ipc = n <= 16;
    const ProvabilityReport cl = check_alpha_provability(fam, ProofRoute::Classical);
    std::optional<ProvabilityReport> ip;
    if (with_ipc) ip = check_alpha_provability(fam, ProofRoute::Intuitionistic);
    const bool exhaustive = n <= 8;
    const SeparationReport sep = check_separation(u, exhaustive);
    const bool ok = cl.ok() && (!ip || ip->ok()) && sep.ok();

    if (g.json) {
        Json j;
        j["n"] = n;
        j["m"] = fam.m();
        j["atoms"] = fam.atom_names();
        Json formulas = Json::array();
        for (const auto& a : fam.formulas()) formulas.push_back(render(a));
        j["formulas"] = std::move(formulas);
        j["valuation"] = valuation_to_json(u.valuation());
        Json r;
        r["pairwise_inconsistent"] = Json{{"classical", cl.pairwise_inconsistent}};
        r["weakly_exhaustive"] = Json{{"classical", cl.weakly_exhaustive}};
        if (ip) {
            r["pairwise_inconsistent"]["ipc"] = ip->pairwise_inconsistent;
            r["weakly_exhaustive"]["ipc"] = ip->weakly_exhaustive;
        }
        r["separated"] = sep.separated;
        r["membership_law"] = sep.membership_law;
        r["membership_pairs"] = exhaustive ? "all" : "singletons and full";
        r["pairs_checked"] = sep.pairs_checked;
        r["ok"] = ok;
        j["report"] = std::move(r);
        print(out, j);
        return ok ? kEstablished : kRefuted;
    }

    out << "n = " << n << ", atoms:";
    for (const auto& a : fam.atom_names()) out << " " << a;
    if (fam.atom_names().empty()) out << " (none)";
    out << "\n";
    for (int i = 1; i <= n; ++i) out << "alpha_" << i << " = " << render(fam.at(i)) << "\n";
    for (const auto& [atom, set] : u.valuation().entries()) {
        out << "u(" << atom << ") =";
        for (World w : set.members()) out << " " << to_string(w);
        if (set.size() == 0) out << " (empty)";
        out << "\n";
    }
    auto yes = [](bool b) { return b ? "ok" : "FAILED"; };
    out << "pairwise inconsistent: classical " << yes(cl.pairwise_inconsistent);
    if (ip) out << ", ipc " << yes(ip->pairwise_inconsistent);
    out << "\n";
    out << "weakly exhaustive: classical " << yes(cl.weakly_exhaustive);
    if (ip) out << ", ipc " << yes(ip->weakly_exhaustive);
    out << "\n";
    out << "separation at maximal worlds: " << yes(sep.separated) << "\n";
    out << "membership law (" << (exhaustive ? "all pairs" : "singletons and full") << "): " << yes(sep.membership_law)
        << "\n";
    for (const auto& msg : cl.failures) out << "failure: " << msg << "\n";
    if (ip)
        for (const auto& msg : ip->failures) out << "failure: " << msg << "\n";
    for (const auto& msg : sep.failures) out << "failure: " << msg << "\n";
    return ok ? kEstablished : kRefuted;
}

int cmd_subst(const Formula& f, int n, const std::string& path, const Globals& g, std::ostream& out) {
    require_range("--n", n, 1, MedvedevFrame::max_generators);
    const Json doc = read_json_file(path);
    const Json* val = &doc;
    if (doc.is_object() && doc.contains("valuation")) {
        if (doc.contains("n") && (!doc["n"].is_number_integer() || doc["n"].get<int>() != n))
            throw UsageError(path + " describes a different frame than --n " + std::to_string(n));
        val = &doc["valuation"];
    }
    const Valuation v = valuation_from_json(*val, n);
    for (const auto& a : atoms(f))
        if (!v.defines(a)) throw UsageError("the valuation does not define " + a);

    const UniversalValuation u = u_valuation(n);
    const Substitution sigma = universal_subst(u.family(), v);
    const Formula image = apply_subst(sigma, f);
    const LemmaReport lemma = verify_lemma(u, v, {f});

    if (g.json) {
        Json j;
        j["n"] = n;
        j["sigma"] = substitution_to_json(sigma);
        j["formula"] = render(f);
        j["image"] = render(image);
        Json mism = Json::array();
        for (const auto& m : lemma.mismatches)
            mism.push_back(Json{{"world", world_to_json(m.world)}, {"under_v", m.under_v}, {"under_u", m.under_u}});
        j["agreement"] = Json{{"ok", lemma.ok()}, {"mismatches", std::move(mism)}};
        print(out, j);
    } else {
        for (const auto& [atom, img] : sigma.mapping()) out << atom << " := " << render(img) << "\n";
        out << "sigma(formula) = " << render(image) << "\n";
        if (lemma.ok()) {
            out << "truth sets agree at every world of M_" << n << "\n";
        } else {
            for (const auto& m : lemma.mismatches)
                out << "mismatch at " << to_string(m.world) << ": " << m.under_v << " under v, " << m.under_u
                    << " under u\n";
        }
    }
    return lemma.ok() ? kEstablished : kRefuted;
}

StructuralBounds bounds_for(const Globals& g, std::size_t count) {
    StructuralBounds b;
    b.seed = g.seed;
    b.sample_count = count;
    return b;
}

int cmd_witness(const Formula& premise, const Formula& conclusion, int max_n, int validity_bound, std::size_t count,
                const Globals& g, std::ostream& out) {
    require_range("--max-n", max_n, 1, MedvedevFrame::max_generators);
    require_range("--validity-bound", validity_bound, 0, MedvedevFrame::max_generators);
    StructuralBounds b = bounds_for(g, count);
    b.validity_bound = validity_bound;
    const auto w = admissibility_witness(premise, conclusion, max_n, b);
    if (!w) return inconclusive(out, g, "no witness found", max_n);
    print(out, admissibility_to_json(*w));
    return kRefuted;
}

int cmd_levin(const Formula& f, int max_n, std::size_t count, const Globals& g, std::ostream& out) {
    require_range("--max-n", max_n, 1, MedvedevFrame::max_generators);
    const auto d = levin_decomposition(f, max_n, bounds_for(g, count));
    if (!d) return inconclusive(out, g, "no counterexample found", max_n);
    print(out, levin_to_json(*d));
    return kRefuted;
}

int cmd_dp(const Formula& left, const Formula& right, int max_n, std::size_t count, const Globals& g,
           std::ostream& out) {
    require_range("--max-n", max_n, 1, MedvedevFrame::max_generators / 2);
    const RefuteOptions o = refute_options("auto", count, g);
    const auto l = refute(left, max_n, o);
    if (!l) return inconclusive(out, g, "no counterexample for the left disjunct", max_n);
    const auto r = refute(right, max_n, o);
    if (!r) return inconclusive(out, g, "no counterexample for the right disjunct", max_n);
    print(out, witness_to_json(dp_countermodel(*l, *r)));
    return kRefuted;
}

int cmd_pmorphism(const std::string& path, const Globals& g, std::ostream& out) {
    const PMorphism f = pmorphism_from_json(read_json_file(path));
    const PMorphismReport r = check_pmorphism(f);
    if (g.json) {
        print(out, Json{{"source", f.source},
                        {"target", f.target},
                        {"well_formed", r.well_formed},
                        {"monotone", r.monotone},
                        {"back_condition", r.back_condition},
                        {"ok", r.ok()},
                        {"violation", r.violation}});
    } else if (r.ok()) {
        out << "p-morphism M_" << f.source << " -> M_" << f.target << ": ok\n";
    } else {
        out << "not a p-morphism: " << r.violation << "\n";
    }
    return r.ok() ? kEstablished : kRefuted;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kripke semantics, rank and certificates for Medvedev's logic of finite problems", "mlogic"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_flag("--json", g.json, "Print JSON");
    app.add_option("--seed", g.seed, "Seed for every sampled search");
    app.add_option("--file", g.file, "Read the formula from a file");
    app.add_flag("-v,--verbose", g.verbose, "Log progress to stderr");

    std::string text, premise, conclusion, left, right, path, mode = "exhaustive", refute_mode = "auto";
    int n = 0, max_n = 3, verify_bound = 0, validity_bound = 4;
    std::size_t count = 1000;
    std::uint64_t budget = 1'000'000;

    std::function<int()> action;
    auto formula_cmd = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("formula", text, "Formula, e.g. \"~p -> q | r\"");
        return sub;
    };

    formula_cmd("parse", "Parse and print a formula")->callback([&] {
        action = [&] { return cmd_parse(formula_arg(text, g), g, out); };
    });
    formula_cmd("rank", "Kreisel-Putnam rank")->callback([&] {
        action = [&] { return cmd_rank(formula_arg(text, g), g, out); };
    });
    auto* normalize = formula_cmd("normalize", "Normal form as a disjunction of negations");
    normalize->add_option("--verify-bound", verify_bound, "Check the equivalence on M_1..N");
    normalize->callback([&] { action = [&] { return cmd_normalize(formula_arg(text, g), verify_bound, g, out); }; });

    auto* prove_ipc = formula_cmd("prove-ipc", "Intuitionistic provability");
    prove_ipc->add_option("--budget", budget, "Maximum sequents expanded");
    prove_ipc->callback([&] { action = [&] { return cmd_prove_ipc(formula_arg(text, g), budget, g, out); }; });
    formula_cmd("prove-cl", "Classical validity")->callback([&] {
        action = [&] { return cmd_prove_cl(formula_arg(text, g), g, out); };
    });

    auto* check = formula_cmd("check", "Validity on one Medvedev frame");
    check->add_option("--n", n, "Frame size")->required();
    check->add_option("--mode", mode, "exhaustive or sample")->check(CLI::IsMember({"exhaustive", "sample"}));
    check->add_option("--count", count, "Sampled valuations");
    check->callback([&] { action = [&] { return cmd_check(formula_arg(text, g), n, mode, count, g, out); }; });

    auto* refute_cmd = formula_cmd("refute", "Search M_1..M_N for a countermodel");
    refute_cmd->add_option("--max-n", max_n, "Largest frame");
    refute_cmd->add_option("--mode", refute_mode, "auto, exhaustive or sample")
        ->check(CLI::IsMember({"auto", "exhaustive", "sample"}));
    refute_cmd->add_option("--count", count, "Sampled valuations per frame");
    refute_cmd->callback(
        [&] { action = [&] { return cmd_refute(formula_arg(text, g), max_n, refute_mode, count, g, out); }; });

    auto* alpha = app.add_subcommand("alpha", "The alpha family and universal valuation u_n");
    alpha->add_option("--n", n, "Family size")->required();
    alpha->callback([&] { action = [&] { return cmd_alpha(n, g, out); }; });

    auto* subst = formula_cmd("subst", "Universal substitution for a valuation");
    subst->add_option("--n", n, "Frame size")->required();
    subst->add_option("--valuation", path, "Valuation or witness JSON file")->required();
    subst->callback([&] { action = [&] { return cmd_subst(formula_arg(text, g), n, path, g, out); }; });

    auto* witness = app.add_subcommand("witness", "Admissibility witness for the rule premise / conclusion");
    witness->add_option("--premise", premise, "Premise formula")->required();
    witness->add_option("--conclusion", conclusion, "Conclusion formula")->required();
    witness->add_option("--max-n", max_n, "Largest frame searched");
    witness->add_option("--validity-bound", validity_bound, "Check the substituted premise on M_1..N");
    witness->add_option("--count", count, "Sampled valuations per frame");
    witness->callback([&] {
        action = [&] {
            return cmd_witness(parse(premise), parse(conclusion), max_n, validity_bound, count, g, out);
        };
    });

    auto* levin = formula_cmd("levin", "Decomposition of a refuted formula into negated bodies");
    levin->add_option("--max-n", max_n, "Largest frame searched");
    levin->add_option("--count", count, "Sampled valuations per frame");
    levin->callback([&] { action = [&] { return cmd_levin(formula_arg(text, g), max_n, count, g, out); }; });

    auto* dp = app.add_subcommand("dp", "Countermodel for a disjunction from countermodels of its disjuncts");
    dp->add_option("--left", left, "Left disjunct")->required();
    dp->add_option("--right", right, "Right disjunct")->required();
    dp->add_option("--max-n", max_n, "Largest frame searched for each side");
    dp->add_option("--count", count, "Sampled valuations per frame");
    dp->callback([&] { action = [&] { return cmd_dp(parse(left), parse(right), max_n, count, g, out); }; });

    auto* pm = app.add_subcommand("pmorphism", "Check a map between Medvedev frames");
    pm->add_option("--check", path, "Map JSON file")->required();
    pm->callback([&] { action = [&] { return cmd_pmorphism(path, g, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kEstablished : kUsageError;
    }

    log::set_level(g.verbose ? log::Level::Info : log::Level::Warning);
    try {
        return action();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const RankOverflow& e) {
        err << "error: " << e.what() << "\n";
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kUsageError;
}

} // namespace mlogic::cli
