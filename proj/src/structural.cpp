#include "mlogic/structural.hpp"

#include <bit>
#include <stdexcept>
#include <unordered_set>

#include "mlogic/errors.hpp"
#include "mlogic/log.hpp"

namespace mlogic {

namespace {

std::uint64_t frame_seed(std::uint64_t seed, int n) {
    return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n));
}

// Exhaustive when affordable, else sampled (or nothing when sampling is off).
std::optional<ValidityResult> check_on(int n, const Formula& f, const StructuralBounds& bounds) {
    const MedvedevFrame frame(n);
    if (exhaustive_within_budget(n, atoms(f).size(), bounds.exhaustive_budget))
        return valid_on(frame, f, CheckMode::exhaustive(), {bounds.exhaustive_budget});
    if (!bounds.allow_sampling) return std::nullopt;
    return valid_on(frame, f, CheckMode::sample(bounds.sample_count, frame_seed(bounds.seed, n)),
                    {bounds.exhaustive_budget});
}

std::vector<FrameCheck> evidence(const Formula& f, int bound, const StructuralBounds& bounds, const char* what) {
    std::vector<FrameCheck> out;
    for (int n = 1; n <= bound; ++n) {
        const auto result = check_on(n, f, bounds);
        if (!result) {
            log::info(std::string(what) + ": M_" + std::to_string(n) + " skipped, exhaustive check over budget");
            continue;
        }
        if (result->verdict == Verdict::Refuted)
            throw InternalError(std::string(what) + " refuted on M_" + std::to_string(n) + " at " +
                                to_string(result->witness->world()));
        out.push_back({n, result->mode, result->verdict, result->valuations_checked});
    }
    return out;
}

// Least world in the frame order: most generators first, then smallest mask.
World least_world(const WorldSet& candidates) {
    World best;
    for (World w : candidates.members()) {
        if (best.mask == 0 || w.generator_count() > best.generator_count()) best = w;
    }
    return best;
}

std::string mask_text(std::uint32_t mask) { return to_string(World{mask}); }

} // namespace

// ---------------------------------------------------------------------------
// Levin decomposition
// ---------------------------------------------------------------------------

std::optional<LevinDecomposition> levin_decomposition(const Formula& phi, int max_n, const StructuralBounds& bounds) {
    RefuteOptions ropts;
    ropts.strategy = bounds.allow_sampling ? RefuteStrategy::Auto : RefuteStrategy::ExhaustiveOnly;
    ropts.sample_count = bounds.sample_count;
    ropts.seed = bounds.seed;
    ropts.exhaustive_budget = bounds.exhaustive_budget;
    auto found = refute(phi, max_n, ropts);
    if (!found) return std::nullopt;

    const int n = found->n();
    Substitution sigma = universal_subst(n, found->valuation());
    Formula image = apply_subst(sigma, phi);

    const Rank rank = kp_rank(image, bounds.rank_cap);
    if (!rank.is_finite()) throw InternalError("substituted formula has infinite rank: " + render(image));
    NegDisjunction nd = kp_normalize(image, bounds.rank_cap);
    if (nd.bodies.size() != rank.value())
        throw InternalError("normal form has " + std::to_string(nd.bodies.size()) + " disjuncts for rank " +
                            rank.str());

    std::vector<Assignment> countermodels;
    const ClassicalOptions copts{bounds.classical_atom_limit};
    for (const auto& body : nd.bodies) {
        auto cm = classical_countermodel(Formula::neg(body), copts);
        if (!cm) throw InternalError("body " + render(body) + " is classically unsatisfiable");
        if (!evaluate_classically(body, *cm)) throw InternalError("assignment does not satisfy " + render(body));
        countermodels.push_back(std::move(*cm));
    }

    auto equivalence =
        evidence(Formula::iff(image, nd.formula()), bounds.equivalence_bound, bounds, "normal form equivalence");

    return LevinDecomposition{phi,
                              std::move(*found),
                              std::move(sigma),
                              std::move(image),
                              std::move(nd.bodies),
                              std::move(countermodels),
                              std::move(equivalence)};
}

// ---------------------------------------------------------------------------
// Admissibility witnesses
// ---------------------------------------------------------------------------

std::optional<AdmissibilityWitness> admissibility_witness(const Formula& phi, const Formula& psi, int max_n,
                                                          const StructuralBounds& bounds) {
    // A world forcing phi but not psi exists exactly when phi -> psi fails
    // somewhere, so the first refuting valuation of the rule formula is the
    // first valuation with a candidate world.
    const Formula rule = Formula::imp(phi, psi);
    for (int n = 1; n <= max_n; ++n) {
        const auto result = check_on(n, rule, bounds);
        if (!result || !result->witness) continue;

        const Valuation& found = result->witness->valuation();
        WorldSet candidates = truth_set(found, phi);
        const WorldSet psi_truth = truth_set(found, psi);
        for (std::size_t i = 0; i < candidates.words().size(); ++i) candidates.words()[i] &= ~psi_truth.words()[i];
        if (candidates.empty()) throw InternalError("refuting valuation for the rule has no candidate world");
        const World w = least_world(candidates);

        const Subframe sub(found.frame(), w);
        Valuation v = sub.restrict(found);
        const int k = sub.frame().n();
        if (truth_set(v, phi) != WorldSet::all(k)) throw InternalError("premise is not global on the subframe");
        if (forces(v, sub.frame().bottom(), psi))
            throw InternalError("conclusion holds at the bottom of the subframe");

        const UniversalValuation u = u_valuation(k);
        Substitution sigma = universal_subst(u.family(), v);
        std::optional<RefutationWitness> refutation;
        try {
            refutation.emplace(u.valuation(), sub.frame().bottom(), apply_subst(sigma, psi));
        } catch (const std::invalid_argument& e) {
            throw InternalError(std::string("u_") + std::to_string(k) + " does not refute the substituted conclusion: " +
                                e.what());
        }
        auto validity = evidence(apply_subst(sigma, phi), bounds.validity_bound, bounds, "substituted premise");

        return AdmissibilityWitness{phi,
                                    psi,
                                    k,
                                    n,
                                    w,
                                    std::move(v),
                                    std::move(sigma),
                                    std::move(*refutation),
                                    std::move(validity)};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// p-morphisms
// ---------------------------------------------------------------------------

PMorphism PMorphism::from_maximal(int source, int target, const std::vector<int>& maximal_images) {
    const MedvedevFrame src(source);
    const MedvedevFrame dst(target);
    if (maximal_images.size() != static_cast<std::size_t>(source))
        throw std::invalid_argument("need one image per maximal world of M_" + std::to_string(source));
    PMorphism f{source, target, std::vector<std::uint32_t>(std::size_t{1} << source, 0)};
    for (std::uint32_t x = 1; x <= src.full_mask(); ++x) {
        const int low = std::countr_zero(x);
        const int j = maximal_images[static_cast<std::size_t>(low)];
        if (j < 1 || j > target)
            throw std::invalid_argument("maximal world " + std::to_string(low + 1) + " mapped outside M_" +
                                        std::to_string(target));
        f.image[x] = f.image[x & (x - 1)] | (std::uint32_t{1} << (j - 1));
    }
    return f;
}

World PMorphism::operator()(World x) const {
    if (x.mask == 0 || x.mask >= image.size())
        throw std::invalid_argument(to_string(x) + " is not a world of M_" + std::to_string(source));
    return World{image[x.mask]};
}

PMorphismReport check_pmorphism(const PMorphism& f) {
    PMorphismReport report;
    if (f.source < 1 || f.source > MedvedevFrame::max_generators || f.target < 1 ||
        f.target > MedvedevFrame::max_generators || f.image.size() != (std::size_t{1} << f.source)) {
        report.well_formed = false;
        report.violation = "map does not cover exactly the worlds of the source frame";
        return report;
    }
    const std::uint32_t src_full = (std::uint32_t{1} << f.source) - 1;
    const std::uint32_t dst_full = (std::uint32_t{1} << f.target) - 1;
    for (std::uint32_t x = 1; x <= src_full; ++x) {
        if (f.image[x] == 0 || (f.image[x] & ~dst_full) != 0) {
            report.well_formed = false;
            report.violation = mask_text(x) + " has no image in M_" + std::to_string(f.target);
            return report;
        }
    }

    for (std::uint32_t x = 1; x <= src_full; ++x) {
        for (std::uint32_t rest = x; rest; rest &= rest - 1) {
            const std::uint32_t above = x & ~(rest & -rest);
            if (above == 0) continue;
            if (f.image[above] & ~f.image[x]) {
                report.monotone = false;
                report.violation = mask_text(x) + " <= " + mask_text(above) + " but f gives " +
                                   mask_text(f.image[x]) + " and " + mask_text(f.image[above]);
                return report;
            }
        }
    }

    std::vector<std::uint32_t> single(static_cast<std::size_t>(f.source));
    for (int i = 0; i < f.source; ++i) single[static_cast<std::size_t>(i)] = f.image[std::uint32_t{1} << i];
    for (std::uint32_t x = 1; x <= src_full; ++x) {
        const std::uint32_t fx = f.image[x];
        for (std::uint32_t y = fx; y; y = (y - 1) & fx) {
            std::uint32_t lifted = 0;
            for (std::uint32_t rest = x; rest; rest &= rest - 1) {
                const int i = std::countr_zero(rest);
                if ((single[static_cast<std::size_t>(i)] & ~y) == 0) lifted |= std::uint32_t{1} << i;
            }
            if (lifted == 0 || f.image[lifted] != y) {
                report.back_condition = false;
                report.violation = "f(" + mask_text(x) + ") = " + mask_text(fx) + " <= " + mask_text(y) +
                                   " but the lifted world " + (lifted ? mask_text(lifted) : std::string("(empty)")) +
                                   (lifted ? " maps to " + mask_text(f.image[lifted]) : std::string());
                return report;
            }
        }
    }
    return report;
}

PMorphism alpha_pmorphism(int m, int n, const Valuation& w) {
    const AlphaFamily family(n);
    const MedvedevFrame src(m);
    if (w.n() != m)
        throw std::invalid_argument("valuation lives on M_" + std::to_string(w.n()) + ", not M_" + std::to_string(m));
    std::vector<WorldSet> truth;
    for (const auto& alpha : family.formulas()) truth.push_back(truth_set(w, alpha));

    std::vector<int> images;
    for (int i = 1; i <= m; ++i) {
        int hit = 0;
        for (int j = 1; j <= n; ++j) {
            if (!truth[static_cast<std::size_t>(j - 1)].test(src.maximal(i))) continue;
            if (hit) throw InternalError("maximal world " + std::to_string(i) + " forces two alpha formulas");
            hit = j;
        }
        if (!hit) throw InternalError("maximal world " + std::to_string(i) + " forces no alpha formula");
        images.push_back(hit);
    }
    PMorphism f = PMorphism::from_maximal(m, n, images);
    const auto report = check_pmorphism(f);
    if (!report.ok()) throw InternalError("alpha map is not a p-morphism: " + report.violation);
    return f;
}

namespace {

void compare_along(const PMorphism& f, const Valuation& target, const Valuation& source, const Formula& chi,
                   TransferReport& report) {
    ++report.formulas_checked;
    const WorldSet up = truth_set(target, chi);
    const WorldSet down = truth_set(source, chi);
    for (World x : source.frame().worlds()) {
        const bool lhs = up.test(f(x));
        const bool rhs = down.test(x);
        if (lhs != rhs) report.mismatches.push_back({render(chi), x, rhs, lhs});
    }
}

void check_shapes(const PMorphism& f, const UniversalValuation& u, const Valuation& w) {
    if (f.target != u.n() || f.source != w.n())
        throw std::invalid_argument("p-morphism M_" + std::to_string(f.source) + " -> M_" + std::to_string(f.target) +
                                    " does not match valuations on M_" + std::to_string(w.n()) + " and M_" +
                                    std::to_string(u.n()));
}

} // namespace

TransferReport transfer_check(const PMorphism& f, const Substitution& sigma, const UniversalValuation& u,
                              const Valuation& w, const std::vector<Formula>& test_formulas) {
    check_shapes(f, u, w);
    TransferReport report;
    for (const auto& chi : test_formulas) compare_along(f, u.valuation(), w, apply_subst(sigma, chi), report);
    return report;
}

TransferReport alpha_transfer_check(const PMorphism& f, const UniversalValuation& u, const Valuation& w) {
    check_shapes(f, u, w);
    TransferReport report;
    for (World I : MedvedevFrame(u.n()).worlds()) compare_along(f, u.valuation(), w, alpha_I(u.family(), I), report);
    return report;
}

std::vector<Formula> default_transfer_formulas(const std::vector<Formula>& rule, std::uint64_t seed,
                                               std::size_t random_count) {
    std::vector<Formula> out;
    std::unordered_set<Formula, FormulaHash> seen;
    for (const auto& f : rule)
        for (auto& g : subformulas(f))
            if (seen.insert(g).second) out.push_back(g);
    auto pool = atoms(std::span<const Formula>(rule));
    if (pool.empty()) pool.push_back("p");
    RandomFormulaGenerator gen(std::move(pool), seed);
    for (std::size_t i = 0; i < random_count; ++i) out.push_back(gen(4));
    return out;
}

} // namespace mlogic
