#include "mlogic/search.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

#include "mlogic/errors.hpp"

namespace mlogic {

RefutationWitness::RefutationWitness(Valuation valuation, World world, Formula formula)
    : valuation_(std::move(valuation)), world_(world), formula_(std::move(formula)) {
    if (!valuation_.frame().contains(world_))
        throw std::invalid_argument(to_string(world_) + " is not a world of M_" + std::to_string(valuation_.n()));
    if (forces(valuation_, world_, formula_))
        throw std::invalid_argument("not a refutation: " + to_string(world_) + " forces " + render(formula_));
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Refuted: return "refuted";
    case Verdict::NoCounterexampleFound: return "no counterexample found";
    }
    return "?";
}

const char* to_string(SearchMode m) { return m == SearchMode::Exhaustive ? "exhaustive" : "sample"; }

std::optional<std::uint64_t> exhaustive_cost(int n, std::size_t atom_count) {
    const auto upsets = upset_count(n);
    if (!upsets) return std::nullopt;
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t cost = (std::uint64_t{1} << n) - 1;
    for (std::size_t i = 0; i < atom_count; ++i) {
        if (cost > cap / *upsets) return cap;
        cost *= *upsets;
    }
    return cost;
}

bool exhaustive_within_budget(int n, std::size_t atom_count, std::uint64_t budget) {
    const auto cost = exhaustive_cost(n, atom_count);
    return cost && *cost <= budget;
}

namespace {

ValidityResult sweep(const MedvedevFrame& frame, const Formula& f, const CompiledFormula& compiled) {
    const int n = frame.n();
    const auto& upsets = upset_words(n);
    const std::size_t k = compiled.atoms().size();
    const std::uint64_t full = WorldSet::all(n).words()[0];

    std::vector<std::size_t> index(k, 0);
    std::vector<std::uint64_t> sets(k, upsets.empty() ? 0 : upsets[0]);
    ValidityResult result;
    result.mode = SearchMode::Exhaustive;
    for (;;) {
        ++result.valuations_checked;
        const std::uint64_t failing = full & ~compiled.eval_word(n, sets);
        if (failing) {
            Valuation val(n);
            for (std::size_t a = 0; a < k; ++a)
                val.set(compiled.atoms()[a], UpSet::from(WorldSet::from_word(n, sets[a])));
            const World w{static_cast<std::uint32_t>(std::countr_zero(failing))};
            result.verdict = Verdict::Refuted;
            result.witness.emplace(std::move(val), w, f);
            return result;
        }
        std::size_t a = k;
        while (a > 0) {
            --a;
            if (++index[a] < upsets.size()) {
                sets[a] = upsets[index[a]];
                break;
            }
            index[a] = 0;
            sets[a] = upsets[0];
            if (a == 0) {
                result.verdict = Verdict::Valid;
                return result;
            }
        }
        if (k == 0) {
            result.verdict = Verdict::Valid;
            return result;
        }
    }
}

ValidityResult sample(const MedvedevFrame& frame, const Formula& f, const CompiledFormula& compiled,
                      std::size_t count, std::uint64_t seed) {
    const int n = frame.n();
    std::mt19937_64 rng(seed);
    const WorldSet all = WorldSet::all(n);
    ValidityResult result;
    result.mode = SearchMode::Sample;
    result.verdict = Verdict::NoCounterexampleFound;
    for (std::size_t i = 0; i < count; ++i) {
        ++result.valuations_checked;
        Valuation val(n);
        std::vector<const WorldSet*> sets;
        for (const auto& atom : compiled.atoms()) val.set(atom, random_upset(frame, rng));
        for (const auto& atom : compiled.atoms()) sets.push_back(&val.at(atom).worlds());
        const WorldSet truth = compiled.eval(n, sets);
        for (World w : frame.worlds()) {
            if (!truth.test(w)) {
                result.verdict = Verdict::Refuted;
                result.witness.emplace(std::move(val), w, f);
                return result;
            }
        }
    }
    return result;
}

} // namespace

ValidityResult valid_on(const MedvedevFrame& frame, const Formula& f, const CheckMode& mode,
                        const ValidityOptions& options) {
    const CompiledFormula compiled(f);
    if (mode.kind == SearchMode::Sample) return sample(frame, f, compiled, mode.count, mode.seed);
    if (!exhaustive_within_budget(frame.n(), compiled.atoms().size(), options.exhaustive_budget)) {
        throw BudgetExceeded("exhaustive check of " + std::to_string(compiled.atoms().size()) + " atoms on M_" +
                             std::to_string(frame.n()) + " exceeds the budget of " +
                             std::to_string(options.exhaustive_budget) + " evaluation steps");
    }
    return sweep(frame, f, compiled);
}

std::optional<RefutationWitness> refute(const Formula& f, int max_n, const RefuteOptions& options) {
    const std::size_t atom_count = atoms(f).size();
    for (int n = 1; n <= max_n; ++n) {
        const MedvedevFrame frame(n);
        const bool exhaustive = options.strategy != RefuteStrategy::SampleOnly &&
                                exhaustive_within_budget(n, atom_count, options.exhaustive_budget);
        if (!exhaustive && options.strategy == RefuteStrategy::ExhaustiveOnly) continue;
        const CheckMode mode = exhaustive
                                   ? CheckMode::exhaustive()
                                   : CheckMode::sample(options.sample_count,
                                                       options.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)));
        auto result = valid_on(frame, f, mode, {options.exhaustive_budget});
        if (result.witness) return std::move(result.witness);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generated subframes
// ---------------------------------------------------------------------------

Subframe::Subframe(const MedvedevFrame& parent, World root)
    : parent_(parent), frame_(root.generator_count() > 0 ? root.generator_count() : 1), root_(root) {
    if (!parent.contains(root))
        throw std::invalid_argument(to_string(root) + " is not a world of M_" + std::to_string(parent.n()));
    generators_ = root.generators();
    for (std::size_t i = 0; i < generators_.size(); ++i) generator_map_.emplace(generators_[i], static_cast<int>(i) + 1);
}

bool Subframe::contains(World parent_world) const noexcept {
    return parent_world.mask != 0 && (parent_world.mask & ~root_.mask) == 0;
}

World Subframe::to_sub(World parent_world) const {
    if (!contains(parent_world))
        throw std::invalid_argument(to_string(parent_world) + " is not above " + to_string(root_));
    World out;
    for (int g : parent_world.generators()) out.mask |= std::uint32_t{1} << (generator_map_.at(g) - 1);
    return out;
}

World Subframe::to_parent(World sub_world) const {
    if (!frame_.contains(sub_world))
        throw std::invalid_argument(to_string(sub_world) + " is not a world of M_" + std::to_string(frame_.n()));
    World out;
    for (int g : sub_world.generators()) out.mask |= std::uint32_t{1} << (generators_[static_cast<std::size_t>(g - 1)] - 1);
    return out;
}

UpSet Subframe::restrict(const UpSet& set) const {
    WorldSet out(frame_.n());
    for (World w : frame_.worlds())
        if (set.contains(to_parent(w))) out.set(w);
    return UpSet::from(std::move(out));
}

Valuation Subframe::restrict(const Valuation& val) const {
    Valuation out(frame_.n());
    for (const auto& [atom, set] : val.entries()) out.set(atom, restrict(set));
    return out;
}

Subframe generated_subframe(const MedvedevFrame& frame, World w) { return Subframe(frame, w); }

// ---------------------------------------------------------------------------
// Disjunction property
// ---------------------------------------------------------------------------

Embedding::Embedding(int source_n, int target_n, int offset)
    : source_n_(source_n), target_n_(target_n), offset_(offset) {
    if (source_n < 1 || offset < 0 || source_n + offset > target_n || target_n > MedvedevFrame::max_generators)
        throw std::invalid_argument("embedding does not fit the target frame");
}

World Embedding::operator()(World w) const {
    if (w.mask == 0 || w.mask >> source_n_)
        throw std::invalid_argument(to_string(w) + " is not a world of M_" + std::to_string(source_n_));
    return World{w.mask << offset_};
}

UpSet Embedding::transport(const UpSet& set) const {
    WorldSet out(target_n_);
    for (World w : set.members()) out.set((*this)(w));
    return UpSet::from(std::move(out));
}

std::pair<Embedding, Embedding> disjoint_embed(int m, int n) {
    if (m < 1 || n < 1 || m + n > MedvedevFrame::max_generators)
        throw std::invalid_argument("disjoint embedding needs m, n >= 1 and m + n <= 20");
    return {Embedding(m, m + n, 0), Embedding(n, m + n, m)};
}

RefutationWitness dp_countermodel(const RefutationWitness& left, const RefutationWitness& right) {
    const auto [into_left, into_right] = disjoint_embed(left.n(), right.n());
    const int total = left.n() + right.n();

    std::map<std::string, WorldSet> combined;
    auto add = [&](const Valuation& val, const Embedding& embed) {
        for (const auto& [atom, set] : val.entries()) {
            auto [it, fresh] = combined.try_emplace(atom, WorldSet(total));
            for (World w : embed.transport(set).members()) it->second.set(w);
        }
    };
    add(left.valuation(), into_left);
    add(right.valuation(), into_right);

    Valuation val(total);
    for (auto& [atom, set] : combined) val.set(atom, UpSet::from(std::move(set)));
    const MedvedevFrame frame(total);
    try {
        return RefutationWitness(std::move(val), frame.bottom(), Formula::disj(left.formula(), right.formula()));
    } catch (const std::invalid_argument& e) {
        throw InternalError(std::string("combined disjunction countermodel failed its check: ") + e.what());
    }
}

} // namespace mlogic
