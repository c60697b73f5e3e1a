#include "mlogic/alpha.hpp"

#include <bit>
#include <stdexcept>

#include "mlogic/errors.hpp"
#include "mlogic/ipc.hpp"

namespace mlogic {

namespace {

// Literal pattern of c_i: p_j is positive iff bit (m - j) of i - 1 is clear.
bool literal_positive(int m, int i, int j) { return (((i - 1) >> (m - j)) & 1) == 0; }

Formula literal_conjunction(const std::vector<std::string>& atom_names, int i) {
    const int m = static_cast<int>(atom_names.size());
    if (m == 0) return Formula::top();
    std::vector<Formula> literals;
    for (int j = 1; j <= m; ++j) {
        Formula p = Formula::atom(atom_names[static_cast<std::size_t>(j - 1)]);
        literals.push_back(literal_positive(m, i, j) ? p : Formula::neg(p));
    }
    return big_and(literals);
}

} // namespace

AlphaFamily::AlphaFamily(int n) : n_(n), m_(0) {
    if (n < 1 || n > kMaxAlphaSize)
        throw std::invalid_argument("alpha family size must be in [1, 1024], got " + std::to_string(n));
    m_ = static_cast<int>(std::bit_width(static_cast<unsigned>(n - 1)));
    for (int j = 1; j <= m_; ++j) atom_names_.push_back("p" + std::to_string(j));
    const int patterns = 1 << m_;
    for (int i = 1; i < n_; ++i) formulas_.push_back(literal_conjunction(atom_names_, i));
    std::vector<Formula> tail;
    for (int i = n_; i <= patterns; ++i) tail.push_back(literal_conjunction(atom_names_, i));
    formulas_.push_back(big_or(tail));
}

const Formula& AlphaFamily::at(int i) const {
    if (i < 1 || i > n_) throw std::invalid_argument("no alpha_" + std::to_string(i) + " for n = " + std::to_string(n_));
    return formulas_[static_cast<std::size_t>(i - 1)];
}

bool AlphaFamily::pattern_bit(int i, int j) const {
    if (i < 1 || i > n_ || j < 1 || j > m_) throw std::invalid_argument("pattern index out of range");
    return literal_positive(m_, i, j);
}

AlphaFamily alpha_formulas(int n) { return AlphaFamily(n); }

Formula alpha_I(const AlphaFamily& family, const std::set<int>& indices) {
    if (indices.empty()) throw std::invalid_argument("alpha_I needs a non-empty index set");
    std::vector<Formula> parts;
    for (int i : indices) parts.push_back(family.at(i));
    return Formula::neg(Formula::neg(big_or(parts)));
}

Formula alpha_I(const AlphaFamily& family, World indices) {
    const auto gens = indices.generators();
    return alpha_I(family, std::set<int>(gens.begin(), gens.end()));
}

// ---------------------------------------------------------------------------
// Universal valuation
// ---------------------------------------------------------------------------

SeparationReport check_separation(const UniversalValuation& u, bool exhaustive) {
    SeparationReport report;
    const AlphaFamily& family = u.family();
    const int n = family.n();
    const MedvedevFrame frame(n);

    for (int j = 1; j <= n; ++j) {
        const WorldSet truth = truth_set(u.valuation(), family.at(j));
        for (int i = 1; i <= n; ++i) {
            ++report.pairs_checked;
            if (truth.test(frame.maximal(i)) != (i == j)) {
                report.separated = false;
                report.failures.push_back("maximal world " + std::to_string(i) +
                                          (i == j ? " does not force " : " forces ") + "alpha_" + std::to_string(j));
            }
        }
    }

    auto check_set = [&](World J) {
        const WorldSet truth = truth_set(u.valuation(), alpha_I(family, J));
        for (World I : frame.worlds()) {
            ++report.pairs_checked;
            const bool inside = (I.mask & ~J.mask) == 0;
            if (truth.test(I) != inside) {
                report.membership_law = false;
                report.failures.push_back(to_string(I) + (inside ? " does not force " : " forces ") + "alpha_" +
                                          to_string(J));
            }
        }
    };
    if (exhaustive) {
        for (World J : frame.worlds()) check_set(J);
    } else {
        for (int j = 1; j <= n; ++j) check_set(frame.maximal(j));
        check_set(frame.bottom());
    }
    return report;
}

UniversalValuation u_valuation(int n) {
    AlphaFamily family(n);
    const MedvedevFrame frame(n);
    Valuation val(n);
    for (int j = 1; j <= family.m(); ++j) {
        std::uint32_t support = 0;
        for (int i = 1; i <= n; ++i)
            if (family.pattern_bit(i, j)) support |= std::uint32_t{1} << (i - 1);
        WorldSet generators(n);
        if (support) generators.set(World{support});
        val.set(family.atom_names()[static_cast<std::size_t>(j - 1)], UpSet::closure(std::move(generators)));
    }
    UniversalValuation u(std::move(family), std::move(val));
    const auto report = check_separation(u, n <= 8);
    if (!report.ok()) throw InternalError("universal valuation u_" + std::to_string(n) + ": " + report.failures.front());
    return u;
}

ProvabilityReport check_alpha_provability(const AlphaFamily& family, ProofRoute route) {
    ProvabilityReport report;
    auto holds = [&](const Formula& f) {
        return route == ProofRoute::Intuitionistic ? ipc_provable(f) : classically_valid(f);
    };
    for (int i = 1; i <= family.n(); ++i) {
        for (int j = i + 1; j <= family.n(); ++j) {
            if (!holds(Formula::neg(Formula::conj(family.at(i), family.at(j))))) {
                report.pairwise_inconsistent = false;
                report.failures.push_back("alpha_" + std::to_string(i) + " and alpha_" + std::to_string(j) +
                                          " are consistent together");
            }
        }
    }
    if (!holds(Formula::neg(Formula::neg(big_or(family.formulas()))))) {
        report.weakly_exhaustive = false;
        report.failures.push_back("~~(alpha_1 | ... | alpha_n) is not provable");
    }
    return report;
}

// ---------------------------------------------------------------------------
// Universal substitution
// ---------------------------------------------------------------------------

Substitution universal_subst(const AlphaFamily& family, const Valuation& v) {
    if (family.n() != v.n())
        throw std::invalid_argument("alpha family for n = " + std::to_string(family.n()) + " used with a valuation on M_" +
                                    std::to_string(v.n()));
    Substitution sigma;
    for (const auto& [atom, truth] : v.entries()) {
        std::vector<Formula> parts;
        for (World I : truth.members()) parts.push_back(alpha_I(family, I));
        sigma.set(atom, big_or(parts));
    }
    return sigma;
}

Substitution universal_subst(int n, const Valuation& v) { return universal_subst(AlphaFamily(n), v); }

LemmaReport verify_lemma(const UniversalValuation& u, const Valuation& v, const std::vector<Formula>& test_formulas) {
    const Substitution sigma = universal_subst(u.family(), v);
    const MedvedevFrame frame(u.n());
    LemmaReport report;
    for (const auto& phi : test_formulas) {
        ++report.formulas_checked;
        const WorldSet lhs = truth_set(v, phi);
        const WorldSet rhs = truth_set(u.valuation(), apply_subst(sigma, phi));
        for (World w : frame.worlds()) {
            if (lhs.test(w) != rhs.test(w)) report.mismatches.push_back({render(phi), w, lhs.test(w), rhs.test(w)});
        }
    }
    return report;
}

LemmaReport verify_lemma(int n, const Valuation& v, const std::vector<Formula>& test_formulas) {
    return verify_lemma(u_valuation(n), v, test_formulas);
}

} // namespace mlogic
