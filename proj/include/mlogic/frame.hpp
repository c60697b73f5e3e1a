#pragma once

// Medvedev frames and intuitionistic forcing on them.
//
// M_n is the set of non-empty subsets I of {1..n}; the world written /\I is
// stored as the bitmask of I (generator i is bit i-1). The order is reverse
// inclusion: /\I <= /\J iff J is a subset of I. So the bottom world is the
// full mask and the maximal worlds are the singletons.
//
// World sets are bitsets indexed directly by mask (bit 0, the empty mask,
// is never set). With that layout the two closures the forcing clauses
// need are subset-sum transforms over the n mask bits.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mlogic/formula.hpp"

namespace mlogic {

struct World {
    std::uint32_t mask = 0;

    /// /\I from a list of 1-based generator indices.
    static World of(std::initializer_list<int> generators);
    static World of(std::span<const int> generators);

    /// Sorted 1-based generator indices.
    std::vector<int> generators() const;
    int generator_count() const noexcept;

    friend auto operator<=>(const World&, const World&) = default;
};

std::string to_string(World w);

class MedvedevFrame {
public:
    static constexpr int max_generators = 20;

    /// Throws std::invalid_argument unless 1 <= n <= 20.
    explicit MedvedevFrame(int n);

    int n() const noexcept { return n_; }
    std::uint32_t world_count() const noexcept { return (std::uint32_t{1} << n_) - 1; }
    std::uint32_t full_mask() const noexcept { return world_count(); }

    bool contains(World w) const noexcept { return w.mask != 0 && (w.mask & ~full_mask()) == 0; }
    World bottom() const noexcept { return World{full_mask()}; }
    /// The maximal world {i}, 1-based.
    World maximal(int i) const;

    /// a <= b in the frame order (b is above a).
    bool leq(World a, World b) const noexcept { return (b.mask & ~a.mask) == 0; }

    /// All worlds in ascending mask order.
    std::vector<World> worlds() const;

    friend bool operator==(const MedvedevFrame&, const MedvedevFrame&) = default;

private:
    int n_;
};

/// A set of worlds of M_n.
class WorldSet {
public:
    WorldSet() = default;
    explicit WorldSet(int n);

    static WorldSet all(int n);
    static WorldSet from_word(int n, std::uint64_t word);

    int n() const noexcept { return n_; }
    bool test(World w) const;
    void set(World w, bool value = true);
    std::size_t count() const;
    bool empty() const;
    std::vector<World> members() const;

    std::span<std::uint64_t> words() noexcept { return words_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const WorldSet&, const WorldSet&) = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Upward closed world set: if /\I is a member, so is /\J for every
/// non-empty J inside I.
class UpSet {
public:
    UpSet() = default;

    static UpSet empty(int n);
    static UpSet all(int n);
    /// Throws std::invalid_argument if the set is not upward closed.
    static UpSet from(WorldSet set);
    static UpSet from_worlds(int n, std::span<const World> worlds);
    /// Smallest up-set containing the given worlds.
    static UpSet closure(WorldSet set);

    int n() const noexcept { return set_.n(); }
    bool contains(World w) const { return set_.test(w); }
    const WorldSet& worlds() const noexcept { return set_; }
    std::vector<World> members() const { return set_.members(); }
    std::size_t size() const { return set_.count(); }

    friend bool operator==(const UpSet&, const UpSet&) = default;

private:
    explicit UpSet(WorldSet set) : set_(std::move(set)) {}
    WorldSet set_;
};

bool is_upward_closed(const WorldSet& set);

/// Atom -> up-set map on a fixed frame.
class Valuation {
public:
    explicit Valuation(int n) : frame_(n) {}

    const MedvedevFrame& frame() const noexcept { return frame_; }
    int n() const noexcept { return frame_.n(); }

    void set(const std::string& atom, UpSet truth);
    bool defines(const std::string& atom) const { return map_.contains(atom); }
    const UpSet& at(const std::string& atom) const;
    const std::map<std::string, UpSet>& entries() const noexcept { return map_; }

    friend bool operator==(const Valuation&, const Valuation&) = default;

private:
    MedvedevFrame frame_;
    std::map<std::string, UpSet> map_;
};

/// Raw atom assignment that need not be upward closed; only the persistence
/// checker accepts it, as a negative control.
using RawAssignment = std::map<std::string, WorldSet>;

/// Formula compiled to straight-line set operations; reused across the
/// valuations of an exhaustive search.
class CompiledFormula {
public:
    explicit CompiledFormula(const Formula& f);

    /// Atom slots in first-occurrence order.
    const std::vector<std::string>& atoms() const noexcept { return atoms_; }

    /// Truth set on M_n, n <= 6, with every set packed into one word.
    std::uint64_t eval_word(int n, std::span<const std::uint64_t> atom_sets) const;

    WorldSet eval(int n, std::span<const WorldSet* const> atom_sets) const;

private:
    enum class Op : std::uint8_t { Load, Bot, Top, Neg, And, Or, Imp };
    struct Instr {
        Op op;
        int a;
        int b;
    };

    std::vector<std::string> atoms_;
    std::vector<Instr> code_;
    mutable std::vector<std::uint64_t> scratch_;
};

/// Worlds that can see a member of s, i.e. {x : some y >= x lies in s}.
WorldSet sees(const WorldSet& s);

/// Truth set of f. Atoms missing from the valuation are an error when
/// strict, and empty otherwise.
WorldSet truth_set(const Valuation& val, const Formula& f, bool strict = true);
WorldSet truth_set(int n, const RawAssignment& val, const Formula& f, bool strict = true);

bool forces(const Valuation& val, World w, const Formula& f, bool strict = true);

/// True iff the truth set of f is upward closed.
bool persistence_check(const Valuation& val, const Formula& f);
bool persistence_check(int n, const RawAssignment& val, const Formula& f);

/// Number of up-sets of M_n, the empty one included, for n <= 6.
std::optional<std::uint64_t> upset_count(int n);

/// Visits every up-set of M_n once, n <= 6, in ascending order of the
/// bitset read as a binary number. The visitor returns false to stop.
void for_each_upset(const MedvedevFrame& frame, const std::function<bool(const UpSet&)>& visit);
std::vector<UpSet> enumerate_upsets(const MedvedevFrame& frame);

/// Packed words of all up-sets of M_n, n <= 6, same order as above. Cached.
const std::vector<std::uint64_t>& upset_words(int n);

/// Random up-set: closure of a few random generator sets, sometimes empty.
UpSet random_upset(const MedvedevFrame& frame, std::mt19937_64& rng);

} // namespace mlogic
