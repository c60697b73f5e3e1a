#pragma once

// Decision procedures for intuitionistic and classical propositional logic.
//
// ipc_provable runs proof search in Dyckhoff's contraction-free sequent
// calculus (G4ip). Every rule instance strictly shrinks the sequent under a
// well-founded multiset order, so search terminates without loop checks.
// Invertible rules are applied eagerly; the two non-invertible choices
// (right disjunction, left implication with an implication antecedent) are
// explored afterwards in that order.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlogic/formula.hpp"

namespace mlogic {

struct ProverOptions {
    /// Maximum number of sequents expanded before giving up.
    std::uint64_t budget = 1'000'000;
};

struct ProverStats {
    std::uint64_t expansions = 0;
    std::uint64_t memo_hits = 0;
};

/// True iff f is an intuitionistic theorem. Throws BudgetExceeded when the
/// search budget runs out; the answer is then unknown.
bool ipc_provable(const Formula& f, const ProverOptions& options = {}, ProverStats* stats = nullptr);

/// Boolean assignment in atom first-occurrence order.
using Assignment = std::vector<std::pair<std::string, bool>>;

struct ClassicalOptions {
    std::size_t atom_limit = 20;
};

bool classically_valid(const Formula& f, const ClassicalOptions& options = {});

/// The first falsifying assignment, enumerating assignments as binary
/// counters with the first atom as the low bit. Empty if f is a tautology.
std::optional<Assignment> classical_countermodel(const Formula& f, const ClassicalOptions& options = {});

/// Classical truth value under an assignment; atoms missing from it are false.
bool evaluate_classically(const Formula& f, const Assignment& assignment);

} // namespace mlogic
