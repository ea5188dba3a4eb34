#pragma once

#include <banet/error.hpp>
#include <banet/state.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace banet {

enum class Op : std::uint8_t { constant, var, negation, conjunction, exclusive_or, disjunction };

/// Immutable Boolean expression over automaton variables x_0..x_{n-1}.
///
/// Nodes are shared, so copies are cheap and a Formula may be used from
/// several threads at once. Conjunction, disjunction and exclusive-or are
/// n-ary with at least two operands; a chain `a & b & c` is one node.
class Formula
{
public:
    Formula() : Formula(constant(false)) {}

    static Formula constant(bool value) { return Formula{Node{Op::constant, value, 0, {}}}; }
    static Formula var(std::size_t index) { return Formula{Node{Op::var, false, index, {}}}; }
    static Formula negation(Formula child) { return Formula{Node{Op::negation, false, 0, {std::move(child)}}}; }
    static Formula conjunction(std::vector<Formula> children) { return nary(Op::conjunction, std::move(children)); }
    static Formula disjunction(std::vector<Formula> children) { return nary(Op::disjunction, std::move(children)); }
    static Formula exclusive_or(std::vector<Formula> children) { return nary(Op::exclusive_or, std::move(children)); }

    Op op() const noexcept { return node_->op; }
    bool value() const noexcept { return node_->value; }
    std::size_t var_index() const noexcept { return node_->var; }
    std::span<const Formula> children() const noexcept { return node_->children; }

    bool is_constant() const noexcept { return op() == Op::constant; }

    /// Structural equality.
    friend bool operator==(const Formula& a, const Formula& b)
    {
        if (a.node_ == b.node_)
            return true;
        if (a.op() != b.op())
            return false;
        switch (a.op()) {
        case Op::constant:
            return a.value() == b.value();
        case Op::var:
            return a.var_index() == b.var_index();
        default:
            return std::ranges::equal(a.children(), b.children());
        }
    }

private:
    struct Node
    {
        Op op;
        bool value;
        std::size_t var;
        std::vector<Formula> children;
    };

    explicit Formula(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

    static Formula nary(Op op, std::vector<Formula> children)
    {
        if (children.size() < 2)
            throw validation_error("n-ary connective needs at least two operands");
        return Formula{Node{op, false, 0, std::move(children)}};
    }

    std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Evaluation

inline bool eval(const Formula& f, State x)
{
    switch (f.op()) {
    case Op::constant:
        return f.value();
    case Op::var:
        return x[f.var_index()];
    case Op::negation:
        return !eval(f.children()[0], x);
    case Op::conjunction:
        return std::ranges::all_of(f.children(), [&](const Formula& c) { return eval(c, x); });
    case Op::disjunction:
        return std::ranges::any_of(f.children(), [&](const Formula& c) { return eval(c, x); });
    case Op::exclusive_or: {
        bool parity = false;
        for (const auto& c : f.children())
            parity ^= eval(c, x);
        return parity;
    }
    }
    return false;
}

/// Syntactic support: every variable index that occurs in f.
inline AutomatonSet variables(const Formula& f)
{
    if (f.op() == Op::var)
        return AutomatonSet::of({f.var_index()});
    AutomatonSet out;
    for (const auto& c : f.children())
        out = out | variables(c);
    return out;
}

/// Largest variable index in f, or nothing for a variable-free formula.
inline std::optional<std::size_t> max_variable(const Formula& f)
{
    if (f.op() == Op::var)
        return f.var_index();
    std::optional<std::size_t> best;
    for (const auto& c : f.children())
        if (auto m = max_variable(c); m && (!best || *m > *best))
            best = m;
    return best;
}

// ---------------------------------------------------------------------------
// Truth tables

namespace detail {

// Bit t of pattern i is bit i of t: the value of x_i at the t-th state of a
// 64-state word.
inline constexpr std::array<std::uint64_t, 6> var_pattern = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// f evaluated on the 64 consecutive states starting at word * 64.
inline std::uint64_t eval_word(const Formula& f, std::uint64_t word)
{
    switch (f.op()) {
    case Op::constant:
        return f.value() ? ~std::uint64_t{0} : 0;
    case Op::var: {
        auto i = f.var_index();
        if (i < 6)
            return var_pattern[i];
        return ((word >> (i - 6)) & 1u) ? ~std::uint64_t{0} : 0;
    }
    case Op::negation:
        return ~eval_word(f.children()[0], word);
    case Op::conjunction: {
        std::uint64_t acc = ~std::uint64_t{0};
        for (const auto& c : f.children())
            acc &= eval_word(c, word);
        return acc;
    }
    case Op::disjunction: {
        std::uint64_t acc = 0;
        for (const auto& c : f.children())
            acc |= eval_word(c, word);
        return acc;
    }
    case Op::exclusive_or: {
        std::uint64_t acc = 0;
        for (const auto& c : f.children())
            acc ^= eval_word(c, word);
        return acc;
    }
    }
    return 0;
}

} // namespace detail

/// The full function table of a formula over B^n, 64 states per word.
class TruthTable
{
public:
    TruthTable(const Formula& f, std::size_t n) : n_(n)
    {
        if (n > max_automata)
            throw cap_exceeded(n, max_automata);
        if (auto m = max_variable(f); m && *m >= n)
            throw validation_error("variable index " + std::to_string(*m) + " out of range for " +
                                   std::to_string(n) + " automata");
        words_.resize(word_count());
        for (std::uint64_t w = 0; w < words_.size(); ++w)
            words_[w] = detail::eval_word(f, w) & valid_mask();
    }

    std::size_t arity() const noexcept { return n_; }

    bool operator[](State x) const noexcept { return (words_[x.bits() >> 6] >> (x.bits() & 63u)) & 1u; }

    std::optional<bool> constant_value() const
    {
        if (std::ranges::all_of(words_, [](std::uint64_t w) { return w == 0; }))
            return false;
        if (std::ranges::all_of(words_, [&](std::uint64_t w) { return w == valid_mask(); }))
            return true;
        return std::nullopt;
    }

    /// Whether raising x_i from 0 to 1 makes the function rise somewhere and
    /// fall somewhere.
    struct Witnesses
    {
        bool rising = false;
        bool falling = false;
    };

    Witnesses witnesses(std::size_t i) const
    {
        Witnesses out;
        if (i >= n_)
            return out;
        if (i < 6) {
            auto low = ~detail::var_pattern[i] & valid_mask();
            auto shift = 1u << i;
            for (auto w : words_) {
                auto at0 = w & low;
                auto at1 = (w >> shift) & low;
                out.rising |= (~at0 & at1) != 0;
                out.falling |= (at0 & ~at1) != 0;
            }
        } else {
            auto stride = std::uint64_t{1} << (i - 6);
            for (std::uint64_t w = 0; w < words_.size(); ++w) {
                if (w & stride)
                    continue;
                auto at0 = words_[w];
                auto at1 = words_[w | stride];
                out.rising |= (~at0 & at1) != 0;
                out.falling |= (at0 & ~at1) != 0;
            }
        }
        return out;
    }

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    std::size_t word_count() const noexcept { return n_ <= 6 ? 1 : std::size_t{1} << (n_ - 6); }
    std::uint64_t valid_mask() const noexcept
    {
        return n_ >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n_)) - 1;
    }

    std::size_t n_;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Dependency and monotonicity

enum class ArcSign : std::uint8_t { positive, negative, non_monotone };

inline std::string_view to_symbol(ArcSign s)
{
    switch (s) {
    case ArcSign::positive:
        return "+";
    case ArcSign::negative:
        return "-";
    case ArcSign::non_monotone:
        return "+-";
    }
    return "?";
}

inline std::optional<ArcSign> sign_of(TruthTable::Witnesses w)
{
    if (w.rising && w.falling)
        return ArcSign::non_monotone;
    if (w.rising)
        return ArcSign::positive;
    if (w.falling)
        return ArcSign::negative;
    return std::nullopt;
}

/// Variables the function actually depends on: i is included iff some
/// single flip of x_i changes f.
inline AutomatonSet semantic_deps(const TruthTable& table)
{
    AutomatonSet out;
    for (std::size_t i = 0; i < table.arity(); ++i) {
        auto w = table.witnesses(i);
        if (w.rising || w.falling)
            out.insert(i);
    }
    return out;
}

inline AutomatonSet semantic_deps(const Formula& f, std::size_t n)
{
    if (n == 0)
        throw validation_error("semantic_deps needs at least one automaton");
    return semantic_deps(TruthTable(f, n));
}

inline std::optional<ArcSign> arc_sign(const Formula& f, std::size_t i, std::size_t n)
{
    return sign_of(TruthTable(f, n).witnesses(i));
}

// ---------------------------------------------------------------------------
// Rewriting

/// Folds constant operands away; never applies any other identity.
inline Formula fold_constants(const Formula& f)
{
    switch (f.op()) {
    case Op::constant:
    case Op::var:
        return f;
    case Op::negation: {
        auto c = fold_constants(f.children()[0]);
        if (c.is_constant())
            return Formula::constant(!c.value());
        return Formula::negation(std::move(c));
    }
    case Op::conjunction:
    case Op::disjunction: {
        // absorbing: 0 for and, 1 for or
        bool absorbing = f.op() == Op::disjunction;
        std::vector<Formula> kept;
        for (const auto& child : f.children()) {
            auto c = fold_constants(child);
            if (c.is_constant()) {
                if (c.value() == absorbing)
                    return Formula::constant(absorbing);
                continue;
            }
            kept.push_back(std::move(c));
        }
        if (kept.empty())
            return Formula::constant(!absorbing);
        if (kept.size() == 1)
            return kept.front();
        return f.op() == Op::conjunction ? Formula::conjunction(std::move(kept))
                                         : Formula::disjunction(std::move(kept));
    }
    case Op::exclusive_or: {
        bool parity = false;
        std::vector<Formula> kept;
        for (const auto& child : f.children()) {
            auto c = fold_constants(child);
            if (c.is_constant())
                parity ^= c.value();
            else
                kept.push_back(std::move(c));
        }
        if (kept.empty())
            return Formula::constant(parity);
        auto rest = kept.size() == 1 ? kept.front() : Formula::exclusive_or(std::move(kept));
        return parity ? Formula::negation(std::move(rest)) : rest;
    }
    }
    return f;
}

/// Replaces every x_i for which `replacement(i)` yields a formula. No folding.
inline Formula substitute(const Formula& f, const std::function<std::optional<Formula>(std::size_t)>& replacement)
{
    switch (f.op()) {
    case Op::constant:
        return f;
    case Op::var:
        if (auto r = replacement(f.var_index()))
            return *r;
        return f;
    case Op::negation:
        return Formula::negation(substitute(f.children()[0], replacement));
    default: {
        std::vector<Formula> kids;
        kids.reserve(f.children().size());
        for (const auto& c : f.children())
            kids.push_back(substitute(c, replacement));
        switch (f.op()) {
        case Op::conjunction:
            return Formula::conjunction(std::move(kids));
        case Op::disjunction:
            return Formula::disjunction(std::move(kids));
        default:
            return Formula::exclusive_or(std::move(kids));
        }
    }
    }
}

// ---------------------------------------------------------------------------
// Printing

/// Maps a variable index to its display name.
using NameFn = std::function<std::string(std::size_t)>;

inline std::string indexed_name(std::size_t i)
{
    return "x" + std::to_string(i);
}

namespace detail {

// Binding strength. Operands of an n-ary node are parenthesized unless they
// are negations or atoms: same-kind nesting needs it to survive re-parsing,
// mixed kinds get it for readability.
inline int binding(Op op)
{
    switch (op) {
    case Op::disjunction:
        return 1;
    case Op::exclusive_or:
        return 2;
    case Op::conjunction:
        return 3;
    case Op::negation:
        return 4;
    default:
        return 5;
    }
}

inline void print_to(std::string& out, const Formula& f, const NameFn& name)
{
    switch (f.op()) {
    case Op::constant:
        out += f.value() ? '1' : '0';
        return;
    case Op::var:
        out += name(f.var_index());
        return;
    case Op::negation: {
        const auto& c = f.children()[0];
        out += '!';
        if (binding(c.op()) < binding(Op::negation)) {
            out += '(';
            print_to(out, c, name);
            out += ')';
        } else {
            print_to(out, c, name);
        }
        return;
    }
    default:
        break;
    }
    std::string_view sep = f.op() == Op::conjunction ? " & " : f.op() == Op::disjunction ? " | " : " ^ ";
    bool first = true;
    for (const auto& c : f.children()) {
        if (!first)
            out += sep;
        first = false;
        if (binding(c.op()) < binding(Op::negation)) {
            out += '(';
            print_to(out, c, name);
            out += ')';
        } else {
            print_to(out, c, name);
        }
    }
}

} // namespace detail

inline std::string print(const Formula& f, const NameFn& name = indexed_name)
{
    std::string out;
    detail::print_to(out, f, name);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   expr  := or
//   or    := xor { "|" xor }
//   xor   := and { "^" and }
//   and   := unary { "&" unary }
//   unary := "!" unary | atom
//   atom  := ident | "0" | "1" | "(" expr ")"
//   ident := [A-Za-z_][A-Za-z0-9_]*

/// Position of a token in the source text (1-based).
struct SourcePos
{
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Resolves an identifier to an automaton index; throws parse_error (using
/// the given position) for names it does not know.
using Resolver = std::function<std::size_t(std::string_view name, SourcePos where)>;

/// Accepts `x<k>` and maps it to index k.
inline std::size_t resolve_indexed(std::string_view name, SourcePos where)
{
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        std::size_t k = 0;
        for (auto c : name.substr(1))
            k = k * 10 + static_cast<std::size_t>(c - '0');
        if (k < max_automata)
            return k;
    }
    throw parse_error("unknown variable '" + std::string(name) + "'", where.line, where.column);
}

namespace detail {

class Parser
{
public:
    Parser(std::string_view text, const Resolver& resolve, SourcePos origin)
        : text_(text), resolve_(resolve), origin_(origin)
    {
    }

    Formula run()
    {
        auto f = parse_nary(Op::disjunction);
        skip_space();
        if (pos_ < text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    static char symbol(Op op) { return op == Op::disjunction ? '|' : op == Op::exclusive_or ? '^' : '&'; }

    static Op tighter(Op op) { return op == Op::disjunction ? Op::exclusive_or : Op::conjunction; }

    Formula parse_nary(Op op)
    {
        auto first = op == Op::conjunction ? parse_unary() : parse_nary(tighter(op));
        std::vector<Formula> operands{first};
        while (peek() == symbol(op)) {
            ++pos_;
            operands.push_back(op == Op::conjunction ? parse_unary() : parse_nary(tighter(op)));
        }
        if (operands.size() == 1)
            return first;
        switch (op) {
        case Op::disjunction:
            return Formula::disjunction(std::move(operands));
        case Op::exclusive_or:
            return Formula::exclusive_or(std::move(operands));
        default:
            return Formula::conjunction(std::move(operands));
        }
    }

    Formula parse_unary()
    {
        if (peek() == '!') {
            ++pos_;
            return Formula::negation(parse_unary());
        }
        return parse_atom();
    }

    Formula parse_atom()
    {
        char c = peek();
        if (c == '\0')
            fail("unexpected end of expression");
        if (c == '(') {
            ++pos_;
            auto f = parse_nary(Op::disjunction);
            if (peek() != ')')
                fail("expected ')'");
            ++pos_;
            return f;
        }
        if (c == '0' || c == '1') {
            ++pos_;
            if (pos_ < text_.size() && is_ident_char(text_[pos_]))
                fail("malformed constant");
            return Formula::constant(c == '1');
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            auto where = position();
            auto start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_]))
                ++pos_;
            return Formula::var(resolve_(text_.substr(start, pos_ - start), where));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    SourcePos position() const
    {
        SourcePos p = origin_;
        for (std::size_t i = 0; i < pos_; ++i) {
            if (text_[i] == '\n') {
                ++p.line;
                p.column = 1;
            } else {
                ++p.column;
            }
        }
        return p;
    }

    [[noreturn]] void fail(const std::string& message) const
    {
        auto p = position();
        throw parse_error(message, p.line, p.column);
    }

    std::string_view text_;
    const Resolver& resolve_;
    SourcePos origin_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `text`. `origin` is the position of its first character, so errors
/// inside a larger document report document coordinates.
inline Formula parse(std::string_view text, const Resolver& resolve = resolve_indexed, SourcePos origin = {})
{
    return detail::Parser(text, resolve, origin).run();
}

} // namespace banet
