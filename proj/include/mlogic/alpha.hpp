#pragma once

// Formulas alpha_1..alpha_n that are pairwise inconsistent, whose
// disjunction is not refutable (~~(alpha_1 | ... | alpha_n) is a theorem),
// and a valuation u_n on M_n under which alpha_j holds at the maximal world
// i exactly when i = j.
//
// With m = ceil(log2 n) atoms p1..pm there are 2^m literal conjunctions
// c_1..c_{2^m}; c_i makes p_j positive iff bit j (most significant first)
// of i-1 is clear, so c_1 = p1 & ... & pm. alpha_i = c_i for i < n, and
// alpha_n is the disjunction of c_n..c_{2^m}.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mlogic/formula.hpp"
#include "mlogic/frame.hpp"

namespace mlogic {

inline constexpr int kMaxAlphaSize = 1 << 10;

class AlphaFamily {
public:
    /// 1 <= n <= 1024.
    explicit AlphaFamily(int n);

    int n() const noexcept { return n_; }
    /// Number of atoms p1..pm, ceil(log2 n).
    int m() const noexcept { return m_; }
    const std::vector<std::string>& atom_names() const noexcept { return atom_names_; }
    const std::vector<Formula>& formulas() const noexcept { return formulas_; }
    /// alpha_i, 1-based.
    const Formula& at(int i) const;

    /// Truth of p_j (1-based) at the maximal world i of the universal
    /// valuation, i.e. in the literal pattern c_i.
    bool pattern_bit(int i, int j) const;

private:
    int n_;
    int m_;
    std::vector<std::string> atom_names_;
    std::vector<Formula> formulas_;
};

AlphaFamily alpha_formulas(int n);

/// ~~(alpha_i1 | alpha_i2 | ...) over I in ascending order.
/// Throws std::invalid_argument on an empty or out-of-range index set.
Formula alpha_I(const AlphaFamily& family, const std::set<int>& indices);
Formula alpha_I(const AlphaFamily& family, World indices);

class UniversalValuation {
public:
    const AlphaFamily& family() const noexcept { return family_; }
    const Valuation& valuation() const noexcept { return valuation_; }
    int n() const noexcept { return family_.n(); }

private:
    friend UniversalValuation u_valuation(int n);
    UniversalValuation(AlphaFamily family, Valuation valuation)
        : family_(std::move(family)), valuation_(std::move(valuation)) {}

    AlphaFamily family_;
    Valuation valuation_;
};

/// u_n(p_j) = {/\I : p_j holds in c_i for every i in I}. Checks condition
/// (iii) and the membership law /\I |- alpha_J <=> I within J before
/// returning (every pair for n <= 8; singleton and full J beyond), and
/// throws InternalError if either fails. 1 <= n <= 20.
UniversalValuation u_valuation(int n);

/// Conditions (i) and (ii): ~(alpha_i & alpha_j) for i != j, and
/// ~~(alpha_1 | ... | alpha_n).
struct ProvabilityReport {
    bool pairwise_inconsistent = true;
    bool weakly_exhaustive = true;
    std::vector<std::string> failures;

    bool ok() const { return pairwise_inconsistent && weakly_exhaustive; }
};

enum class ProofRoute { Intuitionistic, Classical };

ProvabilityReport check_alpha_provability(const AlphaFamily& family, ProofRoute route);

/// Condition (iii) and the membership law, by model checking u_n.
struct SeparationReport {
    bool separated = true;
    bool membership_law = true;
    std::size_t pairs_checked = 0;
    std::vector<std::string> failures;

    bool ok() const { return separated && membership_law; }
};

/// Every (I, J) pair when exhaustive; otherwise J ranges over singletons
/// and the full index set only.
SeparationReport check_separation(const UniversalValuation& u, bool exhaustive);

/// sigma(p) = \/ { alpha_I : /\I in v(p) }, I in ascending mask order, for
/// every atom v defines. Other atoms fall to the ~T default.
Substitution universal_subst(int n, const Valuation& v);
Substitution universal_subst(const AlphaFamily& family, const Valuation& v);

struct LemmaMismatch {
    std::string formula;
    World world;
    bool under_v = false;
    bool under_u = false;
};

struct LemmaReport {
    std::size_t formulas_checked = 0;
    std::vector<LemmaMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
};

/// Compares the truth set of each formula under v with the truth set of its
/// sigma-image under u_n, world by world.
LemmaReport verify_lemma(int n, const Valuation& v, const std::vector<Formula>& test_formulas);
LemmaReport verify_lemma(const UniversalValuation& u, const Valuation& v, const std::vector<Formula>& test_formulas);

} // namespace mlogic
