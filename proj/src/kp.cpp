#include "mlogic/kp.hpp"

#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mlogic/errors.hpp"
#include "mlogic/ipc.hpp"

namespace mlogic {

namespace {

std::string excerpt(const Formula& f) {
    std::string text = render(f);
    if (text.size() > 160) text = text.substr(0, 157) + "...";
    return text;
}

Rank checked(unsigned __int128 value, std::uint64_t cap, const Formula& where) {
    if (value > cap) throw RankOverflow(excerpt(where), cap);
    return Rank::finite(static_cast<std::uint64_t>(value));
}

} // namespace

std::uint64_t Rank::value() const {
    if (!value_) throw std::logic_error("infinite Kreisel-Putnam rank has no value");
    return *value_;
}

Rank Rank::sum(Rank a, Rank b, std::uint64_t cap, const Formula& where) {
    if (!a.is_finite() || !b.is_finite()) return infinite();
    return checked(static_cast<unsigned __int128>(*a.value_) + *b.value_, cap, where);
}

Rank Rank::product(Rank a, Rank b, std::uint64_t cap, const Formula& where) {
    if (!a.is_finite() || !b.is_finite()) return infinite();
    return checked(static_cast<unsigned __int128>(*a.value_) * *b.value_, cap, where);
}

Rank Rank::power(Rank base, Rank exponent, std::uint64_t cap, const Formula& where) {
    if (!base.is_finite() || !exponent.is_finite()) return infinite();
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 0; i < *exponent.value_; ++i) {
        acc *= *base.value_;
        if (acc > cap) throw RankOverflow(excerpt(where), cap);
        if (acc == 1) break;  // base 1
    }
    return checked(acc, cap, where);
}

std::string Rank::str() const { return value_ ? std::to_string(*value_) : "inf"; }

Rank kp_rank(const Formula& f, std::uint64_t cap) {
    std::unordered_map<const void*, Rank> memo;
    std::function<Rank(const Formula&)> go = [&](const Formula& g) -> Rank {
        if (auto it = memo.find(g.identity()); it != memo.end()) return it->second;
        Rank r = Rank::infinite();
        switch (g.kind()) {
        case Connective::Atom: r = Rank::infinite(); break;
        case Connective::Bot:
        case Connective::Top:
        case Connective::Neg: r = Rank::finite(1); break;
        case Connective::Or: r = Rank::sum(go(g.lhs()), go(g.rhs()), cap, g); break;
        case Connective::And: r = Rank::product(go(g.lhs()), go(g.rhs()), cap, g); break;
        case Connective::Imp: r = Rank::power(go(g.rhs()), go(g.lhs()), cap, g); break;
        }
        memo.emplace(g.identity(), r);
        return r;
    };
    return go(f);
}

Formula NegDisjunction::formula() const {
    std::vector<Formula> negated;
    negated.reserve(bodies.size());
    for (const auto& b : bodies) negated.push_back(Formula::neg(b));
    return big_or(negated);
}

namespace {

class Normalizer {
public:
    std::vector<Formula> run(const Formula& g) {
        if (auto it = memo_.find(g.identity()); it != memo_.end()) return it->second;
        std::vector<Formula> out;
        switch (g.kind()) {
        case Connective::Neg: out = {g.lhs()}; break;
        case Connective::Bot: out = {Formula::top()}; break;
        case Connective::Top: out = {Formula::bot()}; break;
        case Connective::Or: {
            out = run(g.lhs());
            const auto rhs = run(g.rhs());
            out.insert(out.end(), rhs.begin(), rhs.end());
            break;
        }
        case Connective::And: {
            // ~a & ~b is ~(a | b).
            const auto lhs = run(g.lhs());
            const auto rhs = run(g.rhs());
            out.reserve(lhs.size() * rhs.size());
            for (const auto& a : lhs)
                for (const auto& b : rhs) out.push_back(Formula::disj(a, b));
            break;
        }
        case Connective::Imp: {
            // (\/_i ~a_i) -> (\/_j ~b_j) is /\_i \/_j (~a_i -> ~b_j), and
            // ~a -> ~b is ~(~a & b). Distributing the conjunction over the
            // disjunctions gives one disjunct per choice function g, and
            // /\_i ~(~a_i & b_g(i)) is ~\/_i (~a_i & b_g(i)).
            const auto ante = run(g.lhs());
            const auto cons = run(g.rhs());
            std::vector<std::size_t> choice(ante.size(), 0);
            for (;;) {
                std::vector<Formula> parts;
                parts.reserve(ante.size());
                for (std::size_t i = 0; i < ante.size(); ++i)
                    parts.push_back(Formula::conj(Formula::neg(ante[i]), cons[choice[i]]));
                out.push_back(big_or(parts));
                std::size_t i = ante.size();
                while (i > 0 && ++choice[i - 1] == cons.size()) choice[--i] = 0;
                if (i == 0) break;
            }
            break;
        }
        case Connective::Atom: throw std::logic_error("atom reached in normalization");
        }
        memo_.emplace(g.identity(), out);
        return out;
    }

private:
    std::unordered_map<const void*, std::vector<Formula>> memo_;
};

} // namespace

NegDisjunction kp_normalize(const Formula& f, std::uint64_t cap) {
    if (!kp_rank(f, cap).is_finite())
        throw std::invalid_argument("formula has infinite Kreisel-Putnam rank: " + excerpt(f));
    return NegDisjunction{Normalizer{}.run(f)};
}

const char* to_string(StepStatus s) {
    switch (s) {
    case StepStatus::Intuitionistic: return "ipc";
    case StepStatus::NeedsWeakKP: return "wKP-only";
    case StepStatus::Unknown: return "unknown";
    }
    return "?";
}

bool NormalFormReport::needs_weak_kp() const {
    for (const auto& s : steps)
        if (s.status == StepStatus::NeedsWeakKP) return true;
    return false;
}

NormalFormReport verify_normal_form(const Formula& f, const NegDisjunction& nd, int bound,
                                    const VerifyOptions& options) {
    NormalFormReport report;
    const Rank rank = kp_rank(f, options.rank_cap);
    if (!rank.is_finite()) throw std::invalid_argument("formula has infinite Kreisel-Putnam rank: " + excerpt(f));
    report.rank = rank.value();
    report.body_count = nd.bodies.size();
    if (report.body_count != report.rank) {
        report.ok = false;
        report.failures.push_back("normal form has " + std::to_string(report.body_count) + " disjuncts, rank is " +
                                  std::to_string(report.rank));
    }

    const Formula target = Formula::iff(f, nd.formula());
    const std::size_t atom_count = atoms(target).size();
    for (int n = 1; n <= bound; ++n) {
        const MedvedevFrame frame(n);
        const CheckMode mode =
            exhaustive_within_budget(n, atom_count, options.exhaustive_budget)
                ? CheckMode::exhaustive()
                : CheckMode::sample(options.sample_count, options.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)));
        const auto result = valid_on(frame, target, mode, {options.exhaustive_budget});
        report.frames.push_back({n, result.mode, result.verdict, result.valuations_checked});
        if (result.verdict == Verdict::Refuted) {
            report.ok = false;
            report.failures.push_back("biconditional refuted on M_" + std::to_string(n) + " at " +
                                      to_string(result.witness->world()));
        }
    }

    Normalizer normalizer;
    auto normal = [&](const Formula& g) { return NegDisjunction{normalizer.run(g)}.formula(); };
    std::unordered_set<const void*> seen;
    std::function<void(const Formula&)> visit = [&](const Formula& g) {
        if (!seen.insert(g.identity()).second || g.is(Connective::Neg)) return;
        Formula local;
        switch (g.kind()) {
        case Connective::Bot:
        case Connective::Top:
            report.constant_rank_convention = true;
            local = Formula::iff(g, normal(g));
            break;
        case Connective::And:
        case Connective::Or:
        case Connective::Imp: {
            visit(g.lhs());
            visit(g.rhs());
            const Formula a = normal(g.lhs());
            const Formula b = normal(g.rhs());
            const Formula rebuilt = g.is(Connective::And)  ? Formula::conj(a, b)
                                    : g.is(Connective::Or) ? Formula::disj(a, b)
                                                           : Formula::imp(a, b);
            local = Formula::iff(rebuilt, normal(g));
            break;
        }
        default: return;
        }
        NormalFormStep step{g.kind(), excerpt(g), excerpt(local), StepStatus::Intuitionistic};
        try {
            step.status = ipc_provable(local, {options.prover_budget}) ? StepStatus::Intuitionistic
                                                                        : StepStatus::NeedsWeakKP;
        } catch (const BudgetExceeded&) {
            step.status = StepStatus::Unknown;
        }
        if (step.status == StepStatus::NeedsWeakKP && !g.is(Connective::Imp)) {
            report.ok = false;
            report.failures.push_back("step for " + step.source + " is not intuitionistically valid");
        }
        report.steps.push_back(std::move(step));
    };
    visit(f);
    return report;
}

} // namespace mlogic
