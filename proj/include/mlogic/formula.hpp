#pragma once

// Formulas of intuitionistic propositional logic.
//
// A Formula is an immutable tree with shared subterms. Negation is a
// primitive constructor rather than sugar for A -> F, since the
// Kreisel-Putnam rank looks at the outermost ~.
//
// Surface syntax (ASCII), loosest to tightest:
//
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := neg ("&" neg)*
//   neg     := "~" neg | atom
//   atom    := ident | "F" | "T" | "(" formula ")"
//   ident   := [a-z][a-zA-Z0-9_]*
//
// All binary connectives associate to the right, so "a | b | c" reads as
// a | (b | c), which is also how big_or folds a list.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlogic {

enum class Connective : std::uint8_t { Atom, Bot, Top, Neg, And, Or, Imp };

class Formula {
public:
    /// Defaults to F.
    Formula();

    static Formula atom(std::string name);
    static Formula bot();
    static Formula top();
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula imp(Formula a, Formula b);
    /// (a -> b) & (b -> a); there is no primitive biconditional.
    static Formula iff(Formula a, Formula b);

    Connective kind() const noexcept { return node_->kind; }
    bool is(Connective c) const noexcept { return node_->kind == c; }

    /// Atom name; empty for every other connective.
    const std::string& name() const noexcept { return node_->name; }
    /// Operand of ~, left operand of a binary connective.
    Formula lhs() const;
    Formula rhs() const;

    std::size_t hash() const noexcept { return node_->hash; }
    std::size_t size() const noexcept { return node_->size; }
    std::size_t depth() const noexcept { return node_->depth; }

    /// Identity of the shared node; equal identities imply equal formulas.
    const void* identity() const noexcept { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        Connective kind;
        std::string name;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
        std::size_t hash;
        std::size_t size;
        std::size_t depth;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Connective kind, std::string name, const Formula* lhs, const Formula* rhs);

    std::shared_ptr<const Node> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

bool is_identifier(std::string_view text);

Formula parse(std::string_view text);
std::string render(const Formula& f);

/// Atom names in order of first occurrence (left to right).
std::vector<std::string> atoms(const Formula& f);
/// Atom names of several formulas, first-occurrence order across the list.
std::vector<std::string> atoms(std::span<const Formula> fs);

/// Right fold with |; the empty disjunction is ~T.
Formula big_or(std::span<const Formula> fs);
/// Right fold with &; the empty conjunction is ~F.
Formula big_and(std::span<const Formula> fs);

/// Distinct subformulas in post-order (children before parents).
std::vector<Formula> subformulas(const Formula& f);

/// A total map from atoms to formulas. Unmapped atoms go to ~T.
class Substitution {
public:
    Substitution() = default;
    explicit Substitution(std::map<std::string, Formula> mapping);

    void set(const std::string& atom, Formula image);
    bool maps(const std::string& atom) const;
    /// Image of an atom; ~T (with a logged warning) when unmapped.
    Formula operator()(const std::string& atom) const;

    const std::map<std::string, Formula>& mapping() const noexcept { return mapping_; }

    /// (this . inner)(p) = apply(this, inner(p)).
    Substitution after(const Substitution& inner) const;

    static Formula default_image();

private:
    std::map<std::string, Formula> mapping_;
};

/// Simultaneous substitution; homomorphic over every connective.
Formula apply_subst(const Substitution& s, const Formula& f);

/// Uniform random formulas over a fixed atom pool. Depth counts connective
/// levels, so depth 0 yields an atom or constant.
class RandomFormulaGenerator {
public:
    RandomFormulaGenerator(std::vector<std::string> atom_pool, std::uint64_t seed);

    Formula operator()(std::size_t max_depth);

    std::mt19937_64& engine() noexcept { return rng_; }

    /// Uniform integer in [lo, hi]; independent of the standard library's
    /// distribution implementations so sequences are reproducible.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

private:
    Formula leaf();

    std::vector<std::string> pool_;
    std::mt19937_64 rng_;
};

} // namespace mlogic
