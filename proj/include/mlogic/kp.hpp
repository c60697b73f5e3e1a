#pragma once

// Kreisel-Putnam rank and the normal form it counts.
//
// rank(~A) = 1, rank(A | B) = m + n, rank(A & B) = m * n and
// rank(A -> B) = n^m, where m and n are the ranks of A and B. Every other
// formula has infinite rank. F and T count as ~T and ~F, so they have rank
// 1; atoms are infinite.
//
// A formula of finite rank k is equivalent, over frames validating the
// weak Kreisel-Putnam axiom, to ~b1 | ... | ~bk. kp_normalize produces the
// bodies b1..bk.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlogic/formula.hpp"
#include "mlogic/search.hpp"

namespace mlogic {

inline constexpr std::uint64_t kDefaultRankCap = std::uint64_t{1} << 20;

class Rank {
public:
    static Rank finite(std::uint64_t value) { return Rank(value); }
    static Rank infinite() { return Rank(); }

    bool is_finite() const noexcept { return value_.has_value(); }
    /// Throws std::logic_error on infinity.
    std::uint64_t value() const;

    /// Exact up to cap; RankOverflow names `where` when the cap is exceeded.
    static Rank sum(Rank a, Rank b, std::uint64_t cap, const Formula& where);
    static Rank product(Rank a, Rank b, std::uint64_t cap, const Formula& where);
    /// base^exponent.
    static Rank power(Rank base, Rank exponent, std::uint64_t cap, const Formula& where);

    std::string str() const;

    friend bool operator==(const Rank&, const Rank&) = default;

private:
    Rank() = default;
    explicit Rank(std::uint64_t v) : value_(v) {}
    std::optional<std::uint64_t> value_;
};

Rank kp_rank(const Formula& f, std::uint64_t cap = kDefaultRankCap);

/// ~b1 | ... | ~bk, the bodies listed in order.
struct NegDisjunction {
    std::vector<Formula> bodies;

    /// big_or of the negated bodies.
    Formula formula() const;
};

/// Throws std::invalid_argument on infinite rank, RankOverflow past cap.
///
/// Disjunct order: | concatenates; & pairs bodies row-major as a_i | b_j;
/// for A -> B with bodies a_1..a_m and b_1..b_n, each choice function g
/// from {1..m} to {1..n}, in lexicographic order, contributes the body
/// (~a_1 & b_g(1)) | ... | (~a_m & b_g(m)).
NegDisjunction kp_normalize(const Formula& f, std::uint64_t cap = kDefaultRankCap);

enum class StepStatus {
    Intuitionistic,  ///< the rewrite step is an IPC equivalence
    NeedsWeakKP,     ///< IPC refutes it; it holds only with the weak KP axiom
    Unknown,         ///< prover budget ran out
};

const char* to_string(StepStatus s);

struct NormalFormStep {
    Connective connective;
    std::string source;       ///< the subformula being rewritten
    std::string equivalence;  ///< the local biconditional that was checked
    StepStatus status = StepStatus::Intuitionistic;
};

struct FrameCheck {
    int n = 0;
    SearchMode mode = SearchMode::Exhaustive;
    Verdict verdict = Verdict::Valid;
    std::uint64_t valuations = 0;
};

struct NormalFormReport {
    std::uint64_t rank = 0;
    std::size_t body_count = 0;
    std::vector<FrameCheck> frames;
    std::vector<NormalFormStep> steps;
    /// Set when F or T occur: they are ranked as ~T / ~F.
    bool constant_rank_convention = false;
    bool ok = true;
    std::vector<std::string> failures;

    bool needs_weak_kp() const;
};

struct VerifyOptions {
    std::uint64_t exhaustive_budget = 1'000'000'000;
    std::size_t sample_count = 1000;
    std::uint64_t seed = 0;
    std::uint64_t prover_budget = 100'000;
    std::uint64_t rank_cap = kDefaultRankCap;
};

/// Checks f <-> nd.formula() on M_1..M_bound (exhaustive within budget,
/// else sampled) and classifies each rewrite step of the normalization by
/// whether IPC alone proves it.
NormalFormReport verify_normal_form(const Formula& f, const NegDisjunction& nd, int bound,
                                    const VerifyOptions& options = {});

} // namespace mlogic
