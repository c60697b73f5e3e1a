#include "mlogic/frame.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace mlogic {

namespace {

// LOW[b] selects the bit positions whose index has bit b clear.
constexpr std::uint64_t kLow[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

std::size_t word_count(int n) { return n >= 6 ? std::size_t{1} << (n - 6) : 1; }

// Valid world bits of word w of M_n (bit 0 of word 0 is the empty mask).
std::uint64_t valid_bits(int n, std::size_t w) {
    std::uint64_t bits = n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
    if (w == 0) bits &= ~std::uint64_t{1};
    return bits;
}

std::uint64_t sees_word(int n, std::uint64_t s) {
    for (int b = 0; b < n && b < 6; ++b) s |= (s & kLow[b]) << (1u << b);
    return s & valid_bits(n, 0);
}

std::uint64_t up_closure_word(int n, std::uint64_t s) {
    for (int b = 0; b < n && b < 6; ++b) s |= (s & ~kLow[b]) >> (1u << b);
    return s & valid_bits(n, 0);
}

void sees_words(int n, std::span<std::uint64_t> s) {
    if (n <= 6) {
        s[0] = sees_word(n, s[0]);
        return;
    }
    for (auto& w : s)
        for (int b = 0; b < 6; ++b) w |= (w & kLow[b]) << (1u << b);
    for (int b = 6; b < n; ++b) {
        const std::size_t stride = std::size_t{1} << (b - 6);
        for (std::size_t w = 0; w < s.size(); ++w)
            if (!(w & stride)) s[w | stride] |= s[w];
    }
    s[0] &= valid_bits(n, 0);
}

void up_closure_words(int n, std::span<std::uint64_t> s) {
    if (n <= 6) {
        s[0] = up_closure_word(n, s[0]);
        return;
    }
    for (int b = 6; b < n; ++b) {
        const std::size_t stride = std::size_t{1} << (b - 6);
        for (std::size_t w = 0; w < s.size(); ++w)
            if (!(w & stride)) s[w] |= s[w | stride];
    }
    for (auto& w : s)
        for (int b = 0; b < 6; ++b) w |= (w & ~kLow[b]) >> (1u << b);
    s[0] &= valid_bits(n, 0);
}

} // namespace

// ---------------------------------------------------------------------------
// World / MedvedevFrame
// ---------------------------------------------------------------------------

World World::of(std::initializer_list<int> generators) {
    return of(std::span<const int>(generators.begin(), generators.size()));
}

World World::of(std::span<const int> generators) {
    World w;
    for (int g : generators) {
        if (g < 1 || g > MedvedevFrame::max_generators)
            throw std::invalid_argument("generator index out of range: " + std::to_string(g));
        w.mask |= std::uint32_t{1} << (g - 1);
    }
    if (w.mask == 0) throw std::invalid_argument("a world needs at least one generator");
    return w;
}

std::vector<int> World::generators() const {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (mask >> i & 1u) out.push_back(i + 1);
    return out;
}

int World::generator_count() const noexcept { return std::popcount(mask); }

std::string to_string(World w) {
    std::string out = "/\\{";
    bool first = true;
    for (int g : w.generators()) {
        if (!first) out += ',';
        out += std::to_string(g);
        first = false;
    }
    return out + "}";
}

MedvedevFrame::MedvedevFrame(int n) : n_(n) {
    if (n < 1 || n > max_generators)
        throw std::invalid_argument("frame size must be in [1, 20], got " + std::to_string(n));
}

World MedvedevFrame::maximal(int i) const {
    if (i < 1 || i > n_) throw std::invalid_argument("no maximal world " + std::to_string(i));
    return World{std::uint32_t{1} << (i - 1)};
}

std::vector<World> MedvedevFrame::worlds() const {
    std::vector<World> out;
    out.reserve(world_count());
    for (std::uint32_t m = 1; m <= full_mask(); ++m) out.push_back(World{m});
    return out;
}

// ---------------------------------------------------------------------------
// WorldSet / UpSet
// ---------------------------------------------------------------------------

WorldSet::WorldSet(int n) : n_(n), words_(word_count(n), 0) {
    if (n < 1 || n > MedvedevFrame::max_generators)
        throw std::invalid_argument("frame size must be in [1, 20], got " + std::to_string(n));
}

WorldSet WorldSet::all(int n) {
    WorldSet s(n);
    for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = valid_bits(n, w);
    return s;
}

WorldSet WorldSet::from_word(int n, std::uint64_t word) {
    if (n > 6) throw std::invalid_argument("single-word world sets need n <= 6");
    WorldSet s(n);
    s.words_[0] = word & valid_bits(n, 0);
    return s;
}

bool WorldSet::test(World w) const {
    if (w.mask == 0 || w.mask >= (std::uint32_t{1} << n_)) return false;
    return (words_[w.mask >> 6] >> (w.mask & 63)) & 1;
}

void WorldSet::set(World w, bool value) {
    if (w.mask == 0 || w.mask >= (std::uint32_t{1} << n_))
        throw std::invalid_argument("world " + to_string(w) + " is not in M_" + std::to_string(n_));
    const std::uint64_t bit = std::uint64_t{1} << (w.mask & 63);
    if (value) words_[w.mask >> 6] |= bit;
    else words_[w.mask >> 6] &= ~bit;
}

std::size_t WorldSet::count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool WorldSet::empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<World> WorldSet::members() const {
    std::vector<World> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            out.push_back(World{static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(b))});
            bits &= bits - 1;
        }
    }
    return out;
}

bool is_upward_closed(const WorldSet& set) {
    WorldSet closed = set;
    up_closure_words(set.n(), closed.words());
    return closed == set;
}

UpSet UpSet::empty(int n) { return UpSet(WorldSet(n)); }
UpSet UpSet::all(int n) { return UpSet(WorldSet::all(n)); }

UpSet UpSet::from(WorldSet set) {
    if (!is_upward_closed(set)) throw std::invalid_argument("world set is not upward closed");
    return UpSet(std::move(set));
}

UpSet UpSet::from_worlds(int n, std::span<const World> worlds) {
    WorldSet s(n);
    for (World w : worlds) s.set(w);
    return from(std::move(s));
}

UpSet UpSet::closure(WorldSet set) {
    up_closure_words(set.n(), set.words());
    return UpSet(std::move(set));
}

WorldSet sees(const WorldSet& s) {
    WorldSet out = s;
    sees_words(s.n(), out.words());
    return out;
}

// ---------------------------------------------------------------------------
// Valuation
// ---------------------------------------------------------------------------

void Valuation::set(const std::string& atom, UpSet truth) {
    if (!is_identifier(atom)) throw std::invalid_argument("not an atom identifier: '" + atom + "'");
    if (truth.n() != n())
        throw std::invalid_argument("up-set for '" + atom + "' lives on M_" + std::to_string(truth.n()) +
                                    ", valuation is on M_" + std::to_string(n()));
    map_.insert_or_assign(atom, std::move(truth));
}

const UpSet& Valuation::at(const std::string& atom) const {
    auto it = map_.find(atom);
    if (it == map_.end()) throw std::out_of_range("valuation does not define atom '" + atom + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Forcing
// ---------------------------------------------------------------------------

CompiledFormula::CompiledFormula(const Formula& f) {
    std::unordered_map<const void*, int> slot_of;
    std::unordered_map<std::string, int> atom_slot;
    std::function<int(const Formula&)> emit = [&](const Formula& g) -> int {
        if (auto it = slot_of.find(g.identity()); it != slot_of.end()) return it->second;
        Instr ins{Op::Bot, 0, 0};
        switch (g.kind()) {
        case Connective::Atom: {
            auto [it, fresh] = atom_slot.try_emplace(g.name(), static_cast<int>(atoms_.size()));
            if (fresh) atoms_.push_back(g.name());
            ins = {Op::Load, it->second, 0};
            break;
        }
        case Connective::Bot: ins = {Op::Bot, 0, 0}; break;
        case Connective::Top: ins = {Op::Top, 0, 0}; break;
        case Connective::Neg: ins = {Op::Neg, emit(g.lhs()), 0}; break;
        case Connective::And: ins = {Op::And, emit(g.lhs()), emit(g.rhs())}; break;
        case Connective::Or: ins = {Op::Or, emit(g.lhs()), emit(g.rhs())}; break;
        case Connective::Imp: ins = {Op::Imp, emit(g.lhs()), emit(g.rhs())}; break;
        }
        code_.push_back(ins);
        const int slot = static_cast<int>(code_.size()) - 1;
        slot_of.emplace(g.identity(), slot);
        return slot;
    };
    emit(f);
}

std::uint64_t CompiledFormula::eval_word(int n, std::span<const std::uint64_t> atom_sets) const {
    const std::uint64_t full = valid_bits(n, 0);
    scratch_.resize(code_.size());
    std::uint64_t* r = scratch_.data();
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& ins = code_[i];
        switch (ins.op) {
        case Op::Load: r[i] = atom_sets[static_cast<std::size_t>(ins.a)]; break;
        case Op::Bot: r[i] = 0; break;
        case Op::Top: r[i] = full; break;
        case Op::Neg: r[i] = full & ~sees_word(n, r[ins.a]); break;
        case Op::And: r[i] = r[ins.a] & r[ins.b]; break;
        case Op::Or: r[i] = r[ins.a] | r[ins.b]; break;
        case Op::Imp: r[i] = full & ~sees_word(n, r[ins.a] & ~r[ins.b]); break;
        }
    }
    return r[code_.size() - 1];
}

WorldSet CompiledFormula::eval(int n, std::span<const WorldSet* const> atom_sets) const {
    if (n <= 6) {
        std::vector<std::uint64_t> packed(atom_sets.size());
        for (std::size_t i = 0; i < atom_sets.size(); ++i) packed[i] = atom_sets[i]->words()[0];
        return WorldSet::from_word(n, eval_word(n, packed));
    }
    const std::size_t words = word_count(n);
    std::vector<std::vector<std::uint64_t>> reg(code_.size(), std::vector<std::uint64_t>(words));
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& ins = code_[i];
        auto& out = reg[i];
        switch (ins.op) {
        case Op::Load: {
            auto src = atom_sets[static_cast<std::size_t>(ins.a)]->words();
            std::copy(src.begin(), src.end(), out.begin());
            break;
        }
        case Op::Bot: break;
        case Op::Top:
            for (std::size_t w = 0; w < words; ++w) out[w] = valid_bits(n, w);
            break;
        case Op::Neg:
        case Op::Imp:
            for (std::size_t w = 0; w < words; ++w)
                out[w] = ins.op == Op::Neg ? reg[ins.a][w] : reg[ins.a][w] & ~reg[ins.b][w];
            sees_words(n, out);
            for (std::size_t w = 0; w < words; ++w) out[w] = valid_bits(n, w) & ~out[w];
            break;
        case Op::And:
            for (std::size_t w = 0; w < words; ++w) out[w] = reg[ins.a][w] & reg[ins.b][w];
            break;
        case Op::Or:
            for (std::size_t w = 0; w < words; ++w) out[w] = reg[ins.a][w] | reg[ins.b][w];
            break;
        }
    }
    WorldSet result(n);
    std::copy(reg.back().begin(), reg.back().end(), result.words().begin());
    return result;
}

namespace {

template <typename Lookup>
WorldSet evaluate(int n, const Formula& f, Lookup lookup) {
    CompiledFormula compiled(f);
    std::vector<WorldSet> storage;
    storage.reserve(compiled.atoms().size());
    for (const auto& atom : compiled.atoms()) storage.push_back(lookup(atom));
    std::vector<const WorldSet*> sets;
    for (const auto& s : storage) sets.push_back(&s);
    return compiled.eval(n, sets);
}

} // namespace

WorldSet truth_set(const Valuation& val, const Formula& f, bool strict) {
    return evaluate(val.n(), f, [&](const std::string& atom) {
        if (val.defines(atom)) return val.at(atom).worlds();
        if (strict) throw std::out_of_range("valuation does not define atom '" + atom + "'");
        return WorldSet(val.n());
    });
}

WorldSet truth_set(int n, const RawAssignment& val, const Formula& f, bool strict) {
    return evaluate(n, f, [&](const std::string& atom) {
        if (auto it = val.find(atom); it != val.end()) {
            if (it->second.n() != n) throw std::invalid_argument("world set for '" + atom + "' has the wrong frame");
            return it->second;
        }
        if (strict) throw std::out_of_range("assignment does not define atom '" + atom + "'");
        return WorldSet(n);
    });
}

bool forces(const Valuation& val, World w, const Formula& f, bool strict) {
    if (!val.frame().contains(w)) throw std::invalid_argument(to_string(w) + " is not a world of M_" + std::to_string(val.n()));
    return truth_set(val, f, strict).test(w);
}

bool persistence_check(const Valuation& val, const Formula& f) {
    return is_upward_closed(truth_set(val, f, false));
}

bool persistence_check(int n, const RawAssignment& val, const Formula& f) {
    return is_upward_closed(truth_set(n, val, f, false));
}

// ---------------------------------------------------------------------------
// Up-set enumeration
// ---------------------------------------------------------------------------

std::optional<std::uint64_t> upset_count(int n) {
    // Dedekind numbers minus one: the constant-true monotone function has
    // no counterpart, since the empty mask is not a world.
    static constexpr std::uint64_t dedekind[] = {2, 3, 6, 20, 168, 7581, 7828354};
    if (n < 1 || n > 6) return std::nullopt;
    return dedekind[n] - 1;
}

namespace {

// Decides masks from the top down, excluding before including, which yields
// the up-sets in ascending numeric order. A mask is forced in once one of
// its one-bit-larger supersets is in.
template <typename Emit>
bool upset_dfs(int n, std::uint32_t mask, std::uint64_t set, Emit& emit) {
    if (mask == 0) return emit(set);
    bool forced = false;
    for (int b = 0; b < n && !forced; ++b) {
        const std::uint32_t bit = std::uint32_t{1} << b;
        if (!(mask & bit) && (set >> (mask | bit)) & 1) forced = true;
    }
    if (!forced && !upset_dfs(n, mask - 1, set, emit)) return false;
    return upset_dfs(n, mask - 1, set | (std::uint64_t{1} << mask), emit);
}

} // namespace

void for_each_upset(const MedvedevFrame& frame, const std::function<bool(const UpSet&)>& visit) {
    const int n = frame.n();
    if (n > 6) throw std::invalid_argument("up-set enumeration is limited to n <= 6");
    auto emit = [&](std::uint64_t word) { return visit(UpSet::from(WorldSet::from_word(n, word))); };
    upset_dfs(n, frame.full_mask(), 0, emit);
}

std::vector<UpSet> enumerate_upsets(const MedvedevFrame& frame) {
    std::vector<UpSet> out;
    for_each_upset(frame, [&](const UpSet& u) {
        out.push_back(u);
        return true;
    });
    return out;
}

const std::vector<std::uint64_t>& upset_words(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("up-set enumeration is limited to n <= 6");
    static std::mutex guard;
    static std::map<int, std::vector<std::uint64_t>> cache;
    std::lock_guard lock(guard);
    auto& entry = cache[n];
    if (entry.empty()) {
        auto emit = [&](std::uint64_t word) {
            entry.push_back(word);
            return true;
        };
        upset_dfs(n, (std::uint32_t{1} << n) - 1, 0, emit);
    }
    return entry;
}

UpSet random_upset(const MedvedevFrame& frame, std::mt19937_64& rng) {
    const int n = frame.n();
    auto below = [&](std::uint64_t bound) { return rng() % bound; };
    WorldSet s(n);
    if (below(8) == 0) return UpSet::empty(n);
    const auto generators = 1 + below(static_cast<std::uint64_t>(n) + 1);
    for (std::uint64_t g = 0; g < generators; ++g) {
        const auto size = 1 + below(static_cast<std::uint64_t>(n));
        std::vector<int> bits(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = i;
        std::uint32_t mask = 0;
        for (std::uint64_t k = 0; k < size; ++k) {
            const auto j = k + below(static_cast<std::uint64_t>(n) - k);
            std::swap(bits[k], bits[j]);
            mask |= std::uint32_t{1} << bits[k];
        }
        s.set(World{mask});
    }
    return UpSet::closure(std::move(s));
}

} // namespace mlogic
