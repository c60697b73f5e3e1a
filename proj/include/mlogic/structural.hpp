#pragma once

// Certificates behind the two structural results for Medvedev's logic.
//
// Levin decomposition: a formula refuted on some M_n by v is turned, via
// the universal substitution for v, into a formula of finite Kreisel-Putnam
// rank whose normal form ~b1 | ... | ~bk has classically satisfiable
// bodies. Each satisfying assignment shows ~bi is unprovable in every
// consistent intermediate logic.
//
// Admissibility witness: for a rule phi / psi that fails at some world, the
// generated subframe above that world is some M_k on which phi is global,
// and the universal substitution for the restricted valuation makes
// sigma(psi) fail under u_k while sigma(phi) stays valid. The p-morphism
// checks cover the step that pulls validity of sigma(phi) back from M_k to
// an arbitrary M_m.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlogic/alpha.hpp"
#include "mlogic/formula.hpp"
#include "mlogic/frame.hpp"
#include "mlogic/ipc.hpp"
#include "mlogic/kp.hpp"
#include "mlogic/search.hpp"

namespace mlogic {

struct StructuralBounds {
    std::uint64_t exhaustive_budget = 1'000'000'000;
    /// Fall back to sampling when an exhaustive sweep is over budget;
    /// otherwise such frames are skipped.
    bool allow_sampling = true;
    std::size_t sample_count = 1000;
    std::uint64_t seed = 0;
    /// sigma(phi) is checked on M_1..validity_bound.
    int validity_bound = 4;
    /// The normal form of sigma(phi) is compared with it on M_1..equivalence_bound.
    int equivalence_bound = 3;
    std::uint64_t rank_cap = kDefaultRankCap;
    std::size_t classical_atom_limit = 20;
};

struct LevinDecomposition {
    Formula source;
    /// The refutation of source on M_n that everything else is built from.
    RefutationWitness refutation;
    Substitution sigma;
    Formula sigma_formula;
    std::vector<Formula> bodies;
    /// countermodels[i] satisfies bodies[i] classically.
    std::vector<Assignment> countermodels;
    /// sigma_formula <-> (~b1 | ... | ~bk) on M_1..equivalence_bound.
    std::vector<FrameCheck> equivalence;

    int n() const { return refutation.n(); }
    const Valuation& v() const { return refutation.valuation(); }
};

/// None when refute(phi, max_n) finds nothing; that is inconclusive.
/// Every part is checked before returning, and a failed check throws
/// InternalError. RankOverflow and BudgetExceeded propagate.
std::optional<LevinDecomposition> levin_decomposition(const Formula& phi, int max_n,
                                                      const StructuralBounds& bounds = {});

struct AdmissibilityWitness {
    Formula premise;
    Formula conclusion;
    /// Frame size after restricting to the generated subframe.
    int k = 0;
    /// Where the first hit was found, before restriction.
    int found_n = 0;
    World found_world;
    /// On M_k: forces premise everywhere, fails conclusion at the bottom.
    Valuation v;
    Substitution sigma;
    /// u_k refuting sigma(conclusion) at the bottom of M_k.
    RefutationWitness refutation;
    /// sigma(premise) on M_1..validity_bound. Its validity on every M_n is
    /// a theorem; this is only evidence up to the bound.
    std::vector<FrameCheck> validity_evidence;
};

/// Searches n = 1..max_n, valuations in enumeration order, for a world
/// forcing phi and not psi. The world kept is the least such world under
/// the frame order for the first valuation that has one (most generators,
/// then smallest mask). None means no configuration up to max_n, which is
/// inconclusive. Throws InternalError if any self-check fails.
std::optional<AdmissibilityWitness> admissibility_witness(const Formula& phi, const Formula& psi, int max_n,
                                                          const StructuralBounds& bounds = {});

/// Monotone map M_m -> M_n stored by mask: image[x] is the mask of f(/\x),
/// image[0] unused.
struct PMorphism {
    int source = 0;
    int target = 0;
    std::vector<std::uint32_t> image;

    /// f(/\I) = /\ f[I] from the images of the maximal worlds (1-based
    /// target indices, one per source generator).
    static PMorphism from_maximal(int source, int target, const std::vector<int>& maximal_images);

    World operator()(World x) const;
};

/// f(i) = the unique j with i in w(alpha_j), extended by meets. w must
/// define the atoms of the n-family on M_m. Throws InternalError if some
/// maximal world forces no alpha_j or more than one, or if the result
/// fails check_pmorphism.
PMorphism alpha_pmorphism(int m, int n, const Valuation& w);

struct PMorphismReport {
    bool well_formed = true;
    bool monotone = true;
    bool back_condition = true;
    std::string violation;

    bool ok() const { return well_formed && monotone && back_condition; }
};

/// Monotonicity on covering pairs (enough by transitivity), then the back
/// condition: for each x = /\I and each y = /\J' >= f(x), the world
/// x' = /\(I n f^-1[J']) must exist and map to y. Stops at the first
/// violation.
PMorphismReport check_pmorphism(const PMorphism& f);

struct TransferMismatch {
    std::string formula;
    World world;
    bool source_side = false;
    bool target_side = false;
};

struct TransferReport {
    std::size_t formulas_checked = 0;
    std::vector<TransferMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
};

/// f(x) in u(sigma(chi)) <=> x in w(sigma(chi)) for every world x of M_m.
TransferReport transfer_check(const PMorphism& f, const Substitution& sigma, const UniversalValuation& u,
                              const Valuation& w, const std::vector<Formula>& test_formulas);

/// f(/\J) in u(alpha_I) <=> /\J in w(alpha_I) for every non-empty I.
TransferReport alpha_transfer_check(const PMorphism& f, const UniversalValuation& u, const Valuation& w);

/// Subformulas of the given rule formulas plus `random_count` random
/// formulas of depth <= 4 over the rule's atoms (p when it has none).
std::vector<Formula> default_transfer_formulas(const std::vector<Formula>& rule, std::uint64_t seed,
                                               std::size_t random_count = 100);

} // namespace mlogic
