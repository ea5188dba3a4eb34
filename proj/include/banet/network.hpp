#pragma once

#include <banet/error.hpp>
#include <banet/formula.hpp>
#include <banet/state.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace banet {

inline bool is_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

/// A Boolean automata network: n named automata, automaton j updated by
/// functions()[j]. Index order is declaration order.
class Ban
{
public:
    Ban(std::vector<std::string> names, std::vector<Formula> functions)
        : names_(std::move(names)), functions_(std::move(functions))
    {
        if (names_.empty())
            throw validation_error("a network needs at least one automaton");
        if (names_.size() > max_automata)
            throw cap_exceeded(names_.size(), max_automata);
        if (names_.size() != functions_.size())
            throw validation_error("one local function per automaton is required");
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!is_identifier(names_[i]))
                throw validation_error("'" + names_[i] + "' is not a valid automaton name");
            if (!index_.emplace(names_[i], i).second)
                throw validation_error("automaton '" + names_[i] + "' is defined twice");
            if (auto m = max_variable(functions_[i]); m && *m >= names_.size())
                throw validation_error("function of '" + names_[i] + "' references automaton " + std::to_string(*m) +
                                       " of a " + std::to_string(names_.size()) + "-automaton network");
        }
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<Formula>& functions() const noexcept { return functions_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const Formula& function(std::size_t i) const { return functions_.at(i); }

    std::optional<std::size_t> index_of(std::string_view name) const
    {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t require_index(std::string_view name) const
    {
        if (auto i = index_of(name))
            return *i;
        throw validation_error("unknown automaton '" + std::string(name) + "'");
    }

    NameFn namer() const
    {
        return [names = names_](std::size_t i) { return names.at(i); };
    }

    std::string print_function(std::size_t i) const { return print(functions_.at(i), namer()); }

private:
    std::vector<std::string> names_;
    std::vector<Formula> functions_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Builds a network from `name = expression` pairs; names resolve to their
/// position in `definitions`, so forward references are fine.
inline Ban ban_from_definitions(const std::vector<std::pair<std::string, std::string>>& definitions)
{
    std::vector<std::string> names;
    for (const auto& [name, expr] : definitions)
        names.push_back(name);
    auto resolve = [&](std::string_view id, SourcePos where) -> std::size_t {
        auto it = std::find(names.begin(), names.end(), id);
        if (it == names.end())
            throw validation_error(std::to_string(where.line) + ":" + std::to_string(where.column) +
                                   ": undefined automaton '" + std::string(id) + "'");
        return static_cast<std::size_t>(it - names.begin());
    };
    std::vector<Formula> functions;
    for (const auto& [name, expr] : definitions)
        functions.push_back(parse(expr, resolve));
    return Ban(std::move(names), std::move(functions));
}

/// U(x): automata whose local function disagrees with their current state.
inline AutomatonSet unstable_set(const Ban& b, State x)
{
    AutomatonSet u;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (eval(b.function(i), x) != x[i])
            u.insert(i);
    return u;
}

// ---------------------------------------------------------------------------
// Interaction graph

struct Arc
{
    std::size_t source;
    std::size_t target;
    ArcSign sign;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Interaction graph with arcs (i, j) for every i that f_j semantically
/// depends on. Arcs are kept sorted by (source, target).
class SignedDigraph
{
public:
    SignedDigraph(std::size_t n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs))
    {
        std::ranges::sort(arcs_, [](const Arc& a, const Arc& b) {
            return std::pair(a.source, a.target) < std::pair(b.source, b.target);
        });
        for (std::size_t k = 0; k < arcs_.size(); ++k) {
            if (arcs_[k].source >= n_ || arcs_[k].target >= n_)
                throw validation_error("arc endpoint out of range");
            if (k > 0 && arcs_[k - 1].source == arcs_[k].source && arcs_[k - 1].target == arcs_[k].target)
                throw validation_error("duplicate arc");
        }
    }

    std::size_t size() const noexcept { return n_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }

    std::optional<ArcSign> sign(std::size_t i, std::size_t j) const
    {
        auto it = std::ranges::lower_bound(arcs_, std::pair(i, j), {},
                                           [](const Arc& a) { return std::pair(a.source, a.target); });
        if (it == arcs_.end() || it->source != i || it->target != j)
            return std::nullopt;
        return it->sign;
    }

    /// Targets of arcs leaving i, ascending.
    std::vector<std::size_t> out_neighbours(std::size_t i) const
    {
        std::vector<std::size_t> out;
        for (const auto& a : arcs_)
            if (a.source == i)
                out.push_back(a.target);
        return out;
    }

private:
    std::size_t n_;
    std::vector<Arc> arcs_;
};

inline SignedDigraph build_igraph(const Ban& b)
{
    std::vector<Arc> arcs;
    for (std::size_t j = 0; j < b.size(); ++j) {
        TruthTable table(b.function(j), b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            if (auto s = sign_of(table.witnesses(i)))
                arcs.push_back({i, j, *s});
    }
    return SignedDigraph(b.size(), std::move(arcs));
}

// ---------------------------------------------------------------------------
// Cycles

struct SignedCycle
{
    /// v0 -> v1 -> ... -> v_{k-1} -> v0, rotated so v0 is the smallest.
    std::vector<std::size_t> vertices;
    bool contains_nonmonotone = false;
    /// Parity of negative arcs; absent when the cycle crosses a non-monotone arc.
    std::optional<bool> negative;
};

/// Sign of a cycle given the signs of its arcs.
inline SignedCycle sign_cycle(std::vector<std::size_t> vertices, const SignedDigraph& g)
{
    SignedCycle c{std::move(vertices), false, std::nullopt};
    bool odd = false;
    for (std::size_t k = 0; k < c.vertices.size(); ++k) {
        auto s = g.sign(c.vertices[k], c.vertices[(k + 1) % c.vertices.size()]);
        if (!s)
            throw validation_error("cycle uses a missing arc");
        if (*s == ArcSign::non_monotone)
            c.contains_nonmonotone = true;
        else if (*s == ArcSign::negative)
            odd = !odd;
    }
    if (!c.contains_nonmonotone)
        c.negative = odd;
    return c;
}

/// All simple directed cycles with at most `max_len` vertices, ordered by
/// (length, vertex sequence). Each cycle is found once, from its smallest
/// vertex, by a depth-bounded search restricted to larger vertices.
inline std::vector<SignedCycle> enumerate_cycles(const SignedDigraph& g, std::size_t max_len)
{
    if (max_len > g.size())
        throw validation_error("cycle length bound exceeds the number of automata");
    std::vector<std::vector<std::size_t>> adj(g.size());
    for (const auto& a : g.arcs())
        adj[a.source].push_back(a.target);

    std::vector<std::vector<std::size_t>> found;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(g.size(), false);

    struct Frame
    {
        std::size_t vertex;
        std::size_t next_edge;
    };

    for (std::size_t start = 0; start < g.size() && max_len > 0; ++start) {
        std::vector<Frame> stack{{start, 0}};
        path.assign(1, start);
        on_path[start] = true;
        while (!stack.empty()) {
            auto& top = stack.back();
            if (top.next_edge == adj[top.vertex].size()) {
                on_path[top.vertex] = false;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            auto w = adj[top.vertex][top.next_edge++];
            if (w == start) {
                found.push_back(path);
            } else if (w > start && !on_path[w] && path.size() < max_len) {
                on_path[w] = true;
                path.push_back(w);
                stack.push_back({w, 0});
            }
        }
    }

    std::ranges::sort(found, [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    std::vector<SignedCycle> out;
    out.reserve(found.size());
    for (auto& vs : found)
        out.push_back(sign_cycle(std::move(vs), g));
    return out;
}

// ---------------------------------------------------------------------------
// Generators

/// Boolean automata cycle a1 -> a2 -> ... -> an -> a1. f_{a1} reads a_n,
/// negated when `negative`; every other a_i copies a_{i-1}.
inline Ban gen_cycle(std::size_t n, bool negative)
{
    if (n == 0)
        throw validation_error("a cycle needs at least one automaton");
    if (n > max_automata)
        throw cap_exceeded(n, max_automata);
    std::vector<std::string> names;
    std::vector<Formula> functions;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("a" + std::to_string(i + 1));
        if (i == 0) {
            auto closing = Formula::var(n - 1);
            functions.push_back(negative ? Formula::negation(closing) : closing);
        } else {
            functions.push_back(Formula::var(i - 1));
        }
    }
    return Ban(std::move(names), std::move(functions));
}

enum class Figure { fig2, fig3_left, fig3_right, fig5_left, fig5_right };

inline std::optional<Figure> figure_from_string(std::string_view id)
{
    if (id == "fig2")
        return Figure::fig2;
    if (id == "fig3_left")
        return Figure::fig3_left;
    if (id == "fig3_right")
        return Figure::fig3_right;
    if (id == "fig5_left")
        return Figure::fig5_left;
    if (id == "fig5_right")
        return Figure::fig5_right;
    return std::nullopt;
}

inline std::string_view to_string(Figure f)
{
    switch (f) {
    case Figure::fig2:
        return "fig2";
    case Figure::fig3_left:
        return "fig3_left";
    case Figure::fig3_right:
        return "fig3_right";
    case Figure::fig5_left:
        return "fig5_left";
    case Figure::fig5_right:
        return "fig5_right";
    }
    return "";
}

/// The worked example networks. Automata with no update rule of their own
/// (x2, x3 of the three-input examples, j of the two-input ones) hold their
/// value.
inline Ban gen_figure_ban(Figure id)
{
    switch (id) {
    case Figure::fig2:
        return ban_from_definitions({
            {"x0", "x2 | (x0 & !x1)"},
            {"x1", "x3 | (!x0 & x1)"},
            {"x2", "!x0 & x1"},
            {"x3", "x0 & !x1"},
        });
    case Figure::fig3_left:
        return ban_from_definitions({
            {"x1", "x2 ^ x3"},
            {"x2", "x2"},
            {"x3", "x3"},
            {"x4", "x2 | x3"},
        });
    case Figure::fig3_right:
        return ban_from_definitions({
            {"x1", "(!x2 | !x3) & x4"},
            {"x2", "x2"},
            {"x3", "x3"},
            {"x4", "x2 | x3"},
        });
    case Figure::fig5_left:
        return ban_from_definitions({
            {"i", "j ^ j"},
            {"j", "j"},
            {"k", "j"},
        });
    case Figure::fig5_right:
        return ban_from_definitions({
            {"i", "j ^ k"},
            {"j", "j"},
            {"k", "j"},
        });
    }
    throw validation_error("unknown figure");
}

inline Ban gen_figure_ban(std::string_view id)
{
    auto f = figure_from_string(id);
    if (!f)
        throw validation_error("unknown figure '" + std::string(id) + "'");
    return gen_figure_ban(*f);
}

} // namespace banet
