#include "mlogic/ipc.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "mlogic/errors.hpp"

namespace mlogic {

namespace {

// Prover-internal terms: negation is unfolded to A -> F and everything is
// hash-consed, so sequents are plain sorted vectors of ints.
enum class Kind : std::uint8_t { Atom, Bot, Top, And, Or, Imp };

struct Term {
    Kind kind;
    int a;
    int b;
};

struct TermKey {
    Kind kind;
    int a;
    int b;
    bool operator==(const TermKey&) const = default;
};

struct TermKeyHash {
    std::size_t operator()(const TermKey& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(k.kind);
        h = h * 1000003u ^ static_cast<std::size_t>(k.a);
        h = h * 1000003u ^ static_cast<std::size_t>(k.b);
        return h;
    }
};

struct SequentKey {
    std::vector<int> gamma;
    int goal;
    bool operator==(const SequentKey&) const = default;
};

struct SequentKeyHash {
    std::size_t operator()(const SequentKey& k) const noexcept {
        std::size_t h = static_cast<std::size_t>(k.goal) * 0x9e3779b97f4a7c15ULL;
        for (int x : k.gamma) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
        return h;
    }
};

class G4ip {
public:
    G4ip(const ProverOptions& options, ProverStats* stats) : options_(options), stats_(stats) {
        bot_ = intern(Kind::Bot, 0, 0);
        top_ = intern(Kind::Top, 0, 0);
    }

    int lower(const Formula& f) {
        if (auto it = lowered_.find(f.identity()); it != lowered_.end()) return it->second;
        int id = 0;
        switch (f.kind()) {
        case Connective::Atom: {
            auto [it, fresh] = atom_ids_.try_emplace(f.name(), static_cast<int>(atom_ids_.size()));
            id = intern(Kind::Atom, it->second, 0);
            break;
        }
        case Connective::Bot: id = bot_; break;
        case Connective::Top: id = top_; break;
        case Connective::Neg: id = intern(Kind::Imp, lower(f.lhs()), bot_); break;
        case Connective::And: id = intern(Kind::And, lower(f.lhs()), lower(f.rhs())); break;
        case Connective::Or: id = intern(Kind::Or, lower(f.lhs()), lower(f.rhs())); break;
        case Connective::Imp: id = intern(Kind::Imp, lower(f.lhs()), lower(f.rhs())); break;
        }
        lowered_.emplace(f.identity(), id);
        return id;
    }

    bool prove(std::vector<int> gamma, int goal) {
        SequentKey key{gamma, goal};
        if (auto it = memo_.find(key); it != memo_.end()) {
            if (stats_) ++stats_->memo_hits;
            return it->second;
        }
        if (++expansions_ > options_.budget)
            throw BudgetExceeded("intuitionistic proof search exceeded " + std::to_string(options_.budget) +
                                 " sequent expansions");
        if (stats_) stats_->expansions = expansions_;
        const bool result = search(std::move(gamma), goal);
        memo_.emplace(std::move(key), result);
        return result;
    }

private:
    int intern(Kind kind, int a, int b) {
        TermKey key{kind, a, b};
        if (auto it = index_.find(key); it != index_.end()) return it->second;
        const int id = static_cast<int>(terms_.size());
        terms_.push_back({kind, a, b});
        index_.emplace(key, id);
        return id;
    }

    static bool contains(const std::vector<int>& gamma, int x) {
        return std::binary_search(gamma.begin(), gamma.end(), x);
    }

    static void insert(std::vector<int>& gamma, int x) {
        auto it = std::lower_bound(gamma.begin(), gamma.end(), x);
        if (it == gamma.end() || *it != x) gamma.insert(it, x);
    }

    static std::vector<int> without(const std::vector<int>& gamma, int x) {
        std::vector<int> out;
        out.reserve(gamma.size());
        for (int y : gamma)
            if (y != x) out.push_back(y);
        return out;
    }

    // Rewrites a left formula by its invertible rule. Returns false when the
    // formula is stuck (atom antecedent not yet available) or needs the
    // non-invertible rule.
    bool reduce_left(std::vector<int>& gamma, int x) {
        const Term t = terms_[x];
        switch (t.kind) {
        case Kind::Top:
            gamma = without(gamma, x);
            return true;
        case Kind::And:
            gamma = without(gamma, x);
            insert(gamma, t.a);
            insert(gamma, t.b);
            return true;
        case Kind::Imp: {
            const Term ante = terms_[t.a];
            switch (ante.kind) {
            case Kind::Atom:
                if (!contains(gamma, t.a)) return false;
                gamma = without(gamma, x);
                insert(gamma, t.b);
                return true;
            case Kind::Top:
                gamma = without(gamma, x);
                insert(gamma, t.b);
                return true;
            case Kind::Bot:
                gamma = without(gamma, x);
                return true;
            case Kind::And:
                gamma = without(gamma, x);
                insert(gamma, intern(Kind::Imp, ante.a, intern(Kind::Imp, ante.b, t.b)));
                return true;
            case Kind::Or:
                gamma = without(gamma, x);
                insert(gamma, intern(Kind::Imp, ante.a, t.b));
                insert(gamma, intern(Kind::Imp, ante.b, t.b));
                return true;
            case Kind::Imp: return false;
            }
            return false;
        }
        default: return false;
        }
    }

    bool search(std::vector<int> gamma, int goal) {
        for (;;) {
            const Term g = terms_[goal];
            if (g.kind == Kind::Top) return true;
            if (g.kind == Kind::Imp) {
                insert(gamma, g.a);
                goal = g.b;
                continue;
            }
            if (g.kind == Kind::And) return prove(gamma, g.a) && prove(gamma, g.b);
            if (contains(gamma, bot_) || contains(gamma, goal)) return true;

            bool progressed = false;
            for (int x : gamma) {
                const Term t = terms_[x];
                if (t.kind == Kind::Or) {
                    auto rest = without(gamma, x);
                    auto left = rest;
                    insert(left, t.a);
                    insert(rest, t.b);
                    return prove(std::move(left), goal) && prove(std::move(rest), goal);
                }
                if (reduce_left(gamma, x)) {
                    progressed = true;
                    break;
                }
            }
            if (!progressed) break;
        }

        // Only atoms, F-free stuck implications and (C -> D) -> B remain on
        // the left; the goal is an atom, F or a disjunction.
        const Term g = terms_[goal];
        if (g.kind == Kind::Or) {
            if (prove(gamma, g.a)) return true;
            if (prove(gamma, g.b)) return true;
        }
        for (int x : gamma) {
            const Term t = terms_[x];
            if (t.kind != Kind::Imp || terms_[t.a].kind != Kind::Imp) continue;
            const Term ante = terms_[t.a];
            auto rest = without(gamma, x);
            auto first = rest;
            insert(first, intern(Kind::Imp, ante.b, t.b));
            if (!prove(std::move(first), t.a)) continue;
            insert(rest, t.b);
            if (prove(std::move(rest), goal)) return true;
        }
        return false;
    }

    ProverOptions options_;
    ProverStats* stats_;
    std::uint64_t expansions_ = 0;
    int bot_ = 0;
    int top_ = 0;
    std::vector<Term> terms_;
    std::unordered_map<TermKey, int, TermKeyHash> index_;
    std::unordered_map<std::string, int> atom_ids_;
    std::unordered_map<const void*, int> lowered_;
    std::unordered_map<SequentKey, bool, SequentKeyHash> memo_;
};

// Bit-parallel truth tables: row r assigns atom j the value of bit j of r.
class TruthTable {
public:
    TruthTable(std::vector<std::string> atom_order, std::size_t limit) : atoms_(std::move(atom_order)) {
        if (atoms_.size() > limit)
            throw BudgetExceeded("classical check over " + std::to_string(atoms_.size()) +
                                 " atoms exceeds the limit of " + std::to_string(limit));
        rows_ = std::uint64_t{1} << atoms_.size();
        words_ = std::max<std::size_t>(1, rows_ / 64);
        valid_ = rows_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows_) - 1;
        for (std::size_t j = 0; j < atoms_.size(); ++j) index_.emplace(atoms_[j], j);
    }

    std::vector<std::uint64_t> eval(const Formula& f) {
        if (auto it = memo_.find(f.identity()); it != memo_.end()) return it->second;
        std::vector<std::uint64_t> out(words_);
        switch (f.kind()) {
        case Connective::Atom: out = column(index_.at(f.name())); break;
        case Connective::Bot: break;
        case Connective::Top: std::fill(out.begin(), out.end(), valid_); break;
        case Connective::Neg: {
            const auto a = eval(f.lhs());
            for (std::size_t w = 0; w < words_; ++w) out[w] = ~a[w] & valid_;
            break;
        }
        default: {
            const auto a = eval(f.lhs());
            const auto b = eval(f.rhs());
            for (std::size_t w = 0; w < words_; ++w) {
                switch (f.kind()) {
                case Connective::And: out[w] = a[w] & b[w]; break;
                case Connective::Or: out[w] = a[w] | b[w]; break;
                default: out[w] = (~a[w] | b[w]) & valid_; break;
                }
            }
        }
        }
        memo_.emplace(f.identity(), out);
        return out;
    }

    std::optional<std::uint64_t> first_false_row(const std::vector<std::uint64_t>& table) const {
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t zeros = ~table[w] & valid_;
            if (zeros) return w * 64 + static_cast<std::uint64_t>(std::countr_zero(zeros));
        }
        return std::nullopt;
    }

    Assignment assignment(std::uint64_t row) const {
        Assignment out;
        for (std::size_t j = 0; j < atoms_.size(); ++j) out.emplace_back(atoms_[j], ((row >> j) & 1) != 0);
        return out;
    }

private:
    std::vector<std::uint64_t> column(std::size_t j) const {
        static constexpr std::uint64_t patterns[6] = {
            0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
            0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
        };
        std::vector<std::uint64_t> out(words_);
        for (std::size_t w = 0; w < words_; ++w) {
            if (j < 6) out[w] = patterns[j] & valid_;
            else out[w] = ((w >> (j - 6)) & 1) ? valid_ : 0;
        }
        return out;
    }

    std::vector<std::string> atoms_;
    std::unordered_map<std::string, std::size_t> index_;
    std::uint64_t rows_ = 1;
    std::size_t words_ = 1;
    std::uint64_t valid_ = 1;
    std::unordered_map<const void*, std::vector<std::uint64_t>> memo_;
};

} // namespace

bool ipc_provable(const Formula& f, const ProverOptions& options, ProverStats* stats) {
    G4ip prover(options, stats);
    const int goal = prover.lower(f);
    return prover.prove({}, goal);
}

bool classically_valid(const Formula& f, const ClassicalOptions& options) {
    return !classical_countermodel(f, options).has_value();
}

std::optional<Assignment> classical_countermodel(const Formula& f, const ClassicalOptions& options) {
    TruthTable table(atoms(f), options.atom_limit);
    const auto values = table.eval(f);
    if (auto row = table.first_false_row(values)) return table.assignment(*row);
    return std::nullopt;
}

bool evaluate_classically(const Formula& f, const Assignment& assignment) {
    switch (f.kind()) {
    case Connective::Atom:
        for (const auto& [name, value] : assignment)
            if (name == f.name()) return value;
        return false;
    case Connective::Bot: return false;
    case Connective::Top: return true;
    case Connective::Neg: return !evaluate_classically(f.lhs(), assignment);
    case Connective::And: return evaluate_classically(f.lhs(), assignment) && evaluate_classically(f.rhs(), assignment);
    case Connective::Or: return evaluate_classically(f.lhs(), assignment) || evaluate_classically(f.rhs(), assignment);
    case Connective::Imp: return !evaluate_classically(f.lhs(), assignment) || evaluate_classically(f.rhs(), assignment);
    }
    return false;
}

} // namespace mlogic
