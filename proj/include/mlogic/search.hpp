#pragma once

// Bounded validity checking and refutation search on Medvedev frames, plus
// the frame surgery used by the disjunction property: generated subframes
// and disjoint embeddings.
//
// Nothing here decides Medvedev's logic. Exhaustive checks settle validity
// on one frame; sampling only ever reports "no counterexample found".

#include <cstdint>
#include <optional>
#include <utility>

#include "mlogic/formula.hpp"
#include "mlogic/frame.hpp"

namespace mlogic {

/// A valuation and world at which a formula is not forced. The constructor
/// checks that claim and throws std::invalid_argument if it does not hold.
class RefutationWitness {
public:
    RefutationWitness(Valuation valuation, World world, Formula formula);

    int n() const noexcept { return valuation_.n(); }
    const Valuation& valuation() const noexcept { return valuation_; }
    World world() const noexcept { return world_; }
    const Formula& formula() const noexcept { return formula_; }

private:
    Valuation valuation_;
    World world_;
    Formula formula_;
};

enum class SearchMode { Exhaustive, Sample };

struct CheckMode {
    SearchMode kind = SearchMode::Exhaustive;
    std::size_t count = 0;
    std::uint64_t seed = 0;

    static CheckMode exhaustive() { return {}; }
    static CheckMode sample(std::size_t count, std::uint64_t seed) { return {SearchMode::Sample, count, seed}; }
};

enum class Verdict {
    Valid,                  ///< exhaustive, no refuting valuation exists
    Refuted,                ///< witness attached
    NoCounterexampleFound,  ///< sampled; evidence only
};

const char* to_string(Verdict v);
const char* to_string(SearchMode m);

struct ValidityResult {
    Verdict verdict = Verdict::Valid;
    SearchMode mode = SearchMode::Exhaustive;
    std::uint64_t valuations_checked = 0;
    std::optional<RefutationWitness> witness;
};

struct ValidityOptions {
    /// Limit on (#up-sets)^(#atoms) * (2^n - 1) for exhaustive checks.
    std::uint64_t exhaustive_budget = 1'000'000'000;
};

/// Cost of the exhaustive sweep in evaluation steps, saturating; empty when
/// M_n is too large to enumerate.
std::optional<std::uint64_t> exhaustive_cost(int n, std::size_t atom_count);
bool exhaustive_within_budget(int n, std::size_t atom_count, std::uint64_t budget);

/// Exhaustive mode visits valuations of the atoms of f (first-occurrence
/// order, last atom varying fastest, each ranging over the up-sets in
/// enumeration order) and reports the first refuting valuation with its
/// least refuting world by mask. Throws BudgetExceeded when the sweep is
/// over budget; callers fall back to sampling.
ValidityResult valid_on(const MedvedevFrame& frame, const Formula& f, const CheckMode& mode,
                        const ValidityOptions& options = {});

enum class RefuteStrategy {
    Auto,            ///< exhaustive where the budget allows, else sample
    ExhaustiveOnly,  ///< skip frames that are over budget
    SampleOnly,
};

struct RefuteOptions {
    RefuteStrategy strategy = RefuteStrategy::Auto;
    std::size_t sample_count = 1000;
    std::uint64_t seed = 0;
    std::uint64_t exhaustive_budget = 1'000'000'000;
};

/// Scans M_1 .. M_max_n and returns the first witness. An empty result
/// means nothing was found up to the bound, not that f is valid.
std::optional<RefutationWitness> refute(const Formula& f, int max_n, const RefuteOptions& options = {});

/// The up-set of a world w = /\I, identified with M_|I| by renumbering the
/// generators of I in increasing order.
class Subframe {
public:
    Subframe(const MedvedevFrame& parent, World root);

    const MedvedevFrame& parent() const noexcept { return parent_; }
    const MedvedevFrame& frame() const noexcept { return frame_; }
    World root() const noexcept { return root_; }

    /// Old generator index -> new one, for the generators of the root.
    const std::map<int, int>& generator_map() const noexcept { return generator_map_; }

    bool contains(World parent_world) const noexcept;
    World to_sub(World parent_world) const;
    World to_parent(World sub_world) const;
    UpSet restrict(const UpSet& set) const;
    Valuation restrict(const Valuation& val) const;

private:
    MedvedevFrame parent_;
    MedvedevFrame frame_;
    World root_;
    std::map<int, int> generator_map_;
    std::vector<int> generators_;
};

Subframe generated_subframe(const MedvedevFrame& frame, World w);

/// Embeds M_source into M_target by shifting generators by offset.
class Embedding {
public:
    Embedding(int source_n, int target_n, int offset);

    int source_n() const noexcept { return source_n_; }
    int target_n() const noexcept { return target_n_; }
    int offset() const noexcept { return offset_; }

    World operator()(World w) const;
    /// Image of an up-set; it stays upward closed in the larger frame.
    UpSet transport(const UpSet& set) const;

private:
    int source_n_;
    int target_n_;
    int offset_;
};

/// M_m onto subsets of {1..m}, M_n onto subsets of {m+1..m+n}.
std::pair<Embedding, Embedding> disjoint_embed(int m, int n);

/// Combines a refutation of phi on M_m and one of psi on M_n into a
/// refutation of phi | psi on M_{m+n}, at the bottom world. Atoms are true
/// exactly on the transported truth sets of the two blocks. Throws
/// InternalError if the combined witness fails its own check.
RefutationWitness dp_countermodel(const RefutationWitness& left, const RefutationWitness& right);

} // namespace mlogic
