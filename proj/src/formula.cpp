#include "mlogic/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mlogic/errors.hpp"
#include "mlogic/log.hpp"

namespace mlogic {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int precedence(Connective c) {
    switch (c) {
    case Connective::Imp: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    case Connective::Neg: return 4;
    default: return 5;
    }
}

const char* symbol(Connective c) {
    switch (c) {
    case Connective::Imp: return " -> ";
    case Connective::Or: return " | ";
    case Connective::And: return " & ";
    default: return "";
    }
}

} // namespace

Formula::Formula() : Formula(bot()) {}

Formula Formula::make(Connective kind, std::string name, const Formula* lhs, const Formula* rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->hash = mix(std::hash<std::string>{}(name), static_cast<std::size_t>(kind));
    node->size = 1;
    node->depth = 0;
    node->name = std::move(name);
    if (lhs) {
        node->lhs = lhs->node_;
        node->hash = mix(node->hash, lhs->hash());
        node->size += lhs->size();
        node->depth = lhs->depth() + 1;
    }
    if (rhs) {
        node->rhs = rhs->node_;
        node->hash = mix(node->hash, rhs->hash());
        node->size += rhs->size();
        node->depth = std::max(node->depth, rhs->depth() + 1);
    }
    return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
    if (!is_identifier(name))
        throw std::invalid_argument("not an atom identifier: '" + name + "'");
    return make(Connective::Atom, std::move(name), nullptr, nullptr);
}

Formula Formula::bot() {
    static const Formula f = make(Connective::Bot, {}, nullptr, nullptr);
    return f;
}

Formula Formula::top() {
    static const Formula f = make(Connective::Top, {}, nullptr, nullptr);
    return f;
}

Formula Formula::neg(Formula f) { return make(Connective::Neg, {}, &f, nullptr); }
Formula Formula::conj(Formula a, Formula b) { return make(Connective::And, {}, &a, &b); }
Formula Formula::disj(Formula a, Formula b) { return make(Connective::Or, {}, &a, &b); }
Formula Formula::imp(Formula a, Formula b) { return make(Connective::Imp, {}, &a, &b); }

Formula Formula::iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }

Formula Formula::lhs() const {
    if (!node_->lhs) throw std::logic_error("formula has no operand");
    return Formula(node_->lhs);
}

Formula Formula::rhs() const {
    if (!node_->rhs) throw std::logic_error("formula has no right operand");
    return Formula(node_->rhs);
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Connective::Atom: return a.name() == b.name();
    case Connective::Bot:
    case Connective::Top: return true;
    case Connective::Neg: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

bool is_identifier(std::string_view text) {
    if (text.empty() || !(text[0] >= 'a' && text[0] <= 'z')) return false;
    return std::all_of(text.begin() + 1, text.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula run() {
        Formula f = imp();
        skip_space();
        if (pos_ != text_.size()) fail(continuations(false));
        return f;
    }

private:
    Formula imp() {
        Formula lhs = disj();
        if (accept("->")) return Formula::imp(lhs, imp());
        return lhs;
    }

    Formula disj() {
        std::vector<Formula> parts{conj()};
        while (accept("|")) parts.push_back(conj());
        return fold(parts, &Formula::disj);
    }

    Formula conj() {
        std::vector<Formula> parts{neg()};
        while (accept("&")) parts.push_back(neg());
        return fold(parts, &Formula::conj);
    }

    Formula neg() {
        if (accept("~")) return Formula::neg(neg());
        return atom();
    }

    Formula atom() {
        skip_space();
        if (accept("(")) {
            ++nesting_;
            Formula f = imp();
            if (!accept(")")) fail(continuations(true));
            --nesting_;
            return f;
        }
        if (pos_ < text_.size()) {
            const char c = text_[pos_];
            if ((c == 'F' || c == 'T') && !ident_char_at(pos_ + 1)) {
                ++pos_;
                return c == 'F' ? Formula::bot() : Formula::top();
            }
            if (c >= 'a' && c <= 'z') {
                const std::size_t start = pos_;
                while (ident_char_at(pos_)) ++pos_;
                return Formula::atom(std::string(text_.substr(start, pos_ - start)));
            }
        }
        fail({"identifier", "F", "T", "~", "("});
    }

    static Formula fold(std::vector<Formula>& parts, Formula (*join)(Formula, Formula)) {
        Formula acc = parts.back();
        for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = join(*it, acc);
        return acc;
    }

    std::vector<std::string> continuations(bool closing) const {
        std::vector<std::string> out{"&", "|", "->"};
        if (closing || nesting_ > 0) out.emplace_back(")");
        else out.emplace_back("end of input");
        return out;
    }

    bool ident_char_at(std::size_t i) const {
        if (i >= text_.size()) return false;
        const char c = text_[i];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_space();
        std::string found = pos_ < text_.size() ? std::string(1, text_[pos_]) : "end of input";
        throw ParseError(pos_, std::move(expected), found);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int nesting_ = 0;
};

void render_into(const Formula& f, std::string& out) {
    switch (f.kind()) {
    case Connective::Atom: out += f.name(); return;
    case Connective::Bot: out += 'F'; return;
    case Connective::Top: out += 'T'; return;
    case Connective::Neg: {
        out += '~';
        const Formula body = f.lhs();
        const bool paren = precedence(body.kind()) < precedence(Connective::Neg);
        if (paren) out += '(';
        render_into(body, out);
        if (paren) out += ')';
        return;
    }
    default: {
        const int p = precedence(f.kind());
        const Formula a = f.lhs();
        const Formula b = f.rhs();
        const bool paren_a = precedence(a.kind()) <= p;
        const bool paren_b = precedence(b.kind()) < p;
        if (paren_a) out += '(';
        render_into(a, out);
        if (paren_a) out += ')';
        out += symbol(f.kind());
        if (paren_b) out += '(';
        render_into(b, out);
        if (paren_b) out += ')';
    }
    }
}

void collect_atoms(const Formula& f, std::vector<std::string>& out,
                   std::unordered_set<std::string>& seen) {
    switch (f.kind()) {
    case Connective::Atom:
        if (seen.insert(f.name()).second) out.push_back(f.name());
        return;
    case Connective::Bot:
    case Connective::Top: return;
    case Connective::Neg: collect_atoms(f.lhs(), out, seen); return;
    default:
        collect_atoms(f.lhs(), out, seen);
        collect_atoms(f.rhs(), out, seen);
    }
}

} // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "syntax error at offset " << offset << ": expected one of {";
          for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? ", " : "") << expected[i];
          msg << "}, found " << (found == "end of input" ? found : "'" + found + "'");
          return msg.str();
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

RankOverflow::RankOverflow(const std::string& subformula, unsigned long long cap)
    : std::runtime_error("Kreisel-Putnam rank exceeds cap " + std::to_string(cap) + " at " + subformula),
      subformula_(subformula) {}

Formula parse(std::string_view text) { return Parser(text).run(); }

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

std::vector<std::string> atoms(const Formula& f) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    collect_atoms(f, out, seen);
    return out;
}

std::vector<std::string> atoms(std::span<const Formula> fs) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& f : fs) collect_atoms(f, out, seen);
    return out;
}

Formula big_or(std::span<const Formula> fs) {
    if (fs.empty()) return Formula::neg(Formula::top());
    Formula acc = fs.back();
    for (auto i = fs.size() - 1; i-- > 0;) acc = Formula::disj(fs[i], acc);
    return acc;
}

Formula big_and(std::span<const Formula> fs) {
    if (fs.empty()) return Formula::neg(Formula::bot());
    Formula acc = fs.back();
    for (auto i = fs.size() - 1; i-- > 0;) acc = Formula::conj(fs[i], acc);
    return acc;
}

std::vector<Formula> subformulas(const Formula& f) {
    std::vector<Formula> out;
    std::unordered_set<Formula, FormulaHash> seen;
    std::function<void(const Formula&)> visit = [&](const Formula& g) {
        if (seen.contains(g)) return;
        if (g.is(Connective::Neg)) visit(g.lhs());
        else if (!g.is(Connective::Atom) && !g.is(Connective::Bot) && !g.is(Connective::Top)) {
            visit(g.lhs());
            visit(g.rhs());
        }
        seen.insert(g);
        out.push_back(g);
    };
    visit(f);
    return out;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

Substitution::Substitution(std::map<std::string, Formula> mapping) : mapping_(std::move(mapping)) {}

void Substitution::set(const std::string& atom, Formula image) { mapping_[atom] = std::move(image); }

bool Substitution::maps(const std::string& atom) const { return mapping_.contains(atom); }

Formula Substitution::default_image() { return Formula::neg(Formula::top()); }

Formula Substitution::operator()(const std::string& atom) const {
    if (auto it = mapping_.find(atom); it != mapping_.end()) return it->second;
    log::warn("substitution leaves atom '" + atom + "' unmapped; using ~T");
    return default_image();
}

Substitution Substitution::after(const Substitution& inner) const {
    Substitution out;
    for (const auto& [atom, image] : inner.mapping_) out.set(atom, apply_subst(*this, image));
    return out;
}

Formula apply_subst(const Substitution& s, const Formula& f) {
    std::unordered_map<const void*, Formula> memo;
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        if (auto it = memo.find(g.identity()); it != memo.end()) return it->second;
        Formula out;
        switch (g.kind()) {
        case Connective::Atom: out = s(g.name()); break;
        case Connective::Bot:
        case Connective::Top: out = g; break;
        case Connective::Neg: out = Formula::neg(go(g.lhs())); break;
        case Connective::And: out = Formula::conj(go(g.lhs()), go(g.rhs())); break;
        case Connective::Or: out = Formula::disj(go(g.lhs()), go(g.rhs())); break;
        case Connective::Imp: out = Formula::imp(go(g.lhs()), go(g.rhs())); break;
        }
        memo.emplace(g.identity(), out);
        return out;
    };
    return go(f);
}

// ---------------------------------------------------------------------------
// Random formulas
// ---------------------------------------------------------------------------

RandomFormulaGenerator::RandomFormulaGenerator(std::vector<std::string> atom_pool, std::uint64_t seed)
    : pool_(std::move(atom_pool)), rng_(seed) {}

std::uint64_t RandomFormulaGenerator::uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return rng_();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do x = rng_();
    while (x >= limit);
    return lo + x % span;
}

Formula RandomFormulaGenerator::leaf() {
    if (pool_.empty() || uniform(0, 9) == 0)
        return uniform(0, 1) ? Formula::top() : Formula::bot();
    return Formula::atom(pool_[uniform(0, pool_.size() - 1)]);
}

Formula RandomFormulaGenerator::operator()(std::size_t max_depth) {
    if (max_depth == 0) return leaf();
    switch (uniform(0, 5)) {
    case 0: return leaf();
    case 1: return Formula::neg((*this)(max_depth - 1));
    case 2: return Formula::conj((*this)(max_depth - 1), (*this)(max_depth - 1));
    case 3: return Formula::disj((*this)(max_depth - 1), (*this)(max_depth - 1));
    default: return Formula::imp((*this)(max_depth - 1), (*this)(max_depth - 1));
    }
}

} // namespace mlogic
