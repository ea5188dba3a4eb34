#pragma once

#include <banet/error.hpp>
#include <banet/formula.hpp>
#include <banet/network.hpp>
#include <banet/schedule.hpp>
#include <banet/state.hpp>

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace banet {

/// Default largest network for full state-space work (parallel, async, bsus).
inline constexpr std::size_t default_state_cap = 20;
/// Default largest network for general transition graphs.
inline constexpr std::size_t default_general_cap = 16;
/// Default largest network for all-pairs checks.
inline constexpr std::size_t default_pair_cap = 12;

inline void require_cap(std::size_t n, std::size_t cap)
{
    if (n > cap || n > max_automata)
        throw cap_exceeded(n, std::min(cap, max_automata));
}

// ---------------------------------------------------------------------------
// Single-state operations, straight from the formulas

/// F(x) = (f_0(x), ..., f_{n-1}(x)).
inline State parallel_step(const Ban& b, State x)
{
    State y;
    for (std::size_t i = 0; i < b.size(); ++i)
        y = y.with(i, eval(b.function(i), x));
    return y;
}

/// One successor per unstable automaton, flipping only that automaton.
inline std::vector<std::pair<State, std::size_t>> async_successors(const Ban& b, State x)
{
    std::vector<std::pair<State, std::size_t>> out;
    for (auto i : unstable_set(b, x).members())
        out.emplace_back(x.flipped(i), i);
    return out;
}

/// One successor per non-empty D within U(x), flipping exactly D. Ordered by
/// the bit mask of D.
inline std::vector<std::pair<State, AutomatonSet>> general_successors(const Ban& b, State x)
{
    std::vector<std::pair<State, AutomatonSet>> out;
    auto u = std::uint64_t{unstable_set(b, x).mask()};
    for (std::uint64_t d = (0 - u) & u; d != 0; d = (d - u) & u)
        out.emplace_back(x.flipped(AutomatonSet{static_cast<std::uint32_t>(d)}),
                         AutomatonSet{static_cast<std::uint32_t>(d)});
    return out;
}

// ---------------------------------------------------------------------------
// Tabulated dynamics

/// F tabulated over all of B^n: entry x holds the bits of F(x).
class GlobalMap
{
public:
    explicit GlobalMap(const Ban& b, std::size_t cap = default_state_cap) : n_(b.size())
    {
        require_cap(n_, cap);
        table_.assign(state_count(n_), 0);
        for (std::size_t j = 0; j < n_; ++j) {
            TruthTable t(b.function(j), n_);
            auto bit = std::uint32_t{1} << j;
            for (std::uint64_t x = 0; x < table_.size(); ++x)
                if (t[State{static_cast<std::uint32_t>(x)}])
                    table_[x] |= bit;
        }
    }

    std::size_t size() const noexcept { return n_; }
    std::uint64_t states() const noexcept { return table_.size(); }
    State operator()(State x) const noexcept { return State{table_[x.bits()]}; }
    AutomatonSet unstable(State x) const noexcept { return difference(x, (*this)(x)); }
    const std::vector<std::uint32_t>& table() const noexcept { return table_; }

    /// One period of a block-sequential schedule: each block overwrites its
    /// automata with F of the state left by the previous block.
    State period(const BlockSchedule& s, State x) const noexcept
    {
        for (auto block : s.blocks()) {
            auto m = block.mask();
            x = State{(x.bits() & ~m) | (table_[x.bits()] & m)};
        }
        return x;
    }

private:
    std::size_t n_;
    std::vector<std::uint32_t> table_;
};

/// Histogram of |U(x)| over every state: entry k counts states with k
/// unstable automata.
inline std::vector<std::uint64_t> instability_histogram(const GlobalMap& f)
{
    std::vector<std::uint64_t> h(f.size() + 1, 0);
    for (std::uint64_t x = 0; x < f.states(); ++x)
        ++h[f.unstable(State{static_cast<std::uint32_t>(x)}).size()];
    return h;
}

enum class Mode { parallel, async, general, bsus };

inline std::string_view to_string(Mode m)
{
    switch (m) {
    case Mode::parallel:
        return "parallel";
    case Mode::async:
        return "async";
    case Mode::general:
        return "general";
    case Mode::bsus:
        return "bsus";
    }
    return "";
}

struct Transition
{
    State target;
    AutomatonSet label;
};

/// Implicit transition relation over B^n. Successors are produced through a
/// resumable cursor so that depth-first traversals can suspend mid-list;
/// order is by ascending label mask. The vacuous general self-pair (x, x) is
/// never produced.
class Semantics
{
public:
    static Semantics parallel(const GlobalMap& f) { return Semantics(Mode::parallel, f.size(), f.table()); }
    static Semantics async(const GlobalMap& f) { return Semantics(Mode::async, f.size(), f.table()); }
    static Semantics general(const GlobalMap& f) { return Semantics(Mode::general, f.size(), f.table()); }

    static Semantics bsus(const GlobalMap& f, const BlockSchedule& s)
    {
        if (s.size() != f.size())
            throw validation_error("schedule and network sizes differ");
        std::vector<std::uint32_t> image(f.states());
        for (std::uint64_t x = 0; x < image.size(); ++x)
            image[x] = f.period(s, State{static_cast<std::uint32_t>(x)}).bits();
        return Semantics(Mode::bsus, f.size(), std::move(image));
    }

    Mode mode() const noexcept { return mode_; }
    std::size_t size() const noexcept { return n_; }
    std::uint64_t states() const noexcept { return table_.size(); }
    bool deterministic() const noexcept { return mode_ == Mode::parallel || mode_ == Mode::bsus; }

    /// The image of x for deterministic semantics.
    State image(State x) const noexcept { return State{table_[x.bits()]}; }

    std::uint64_t begin(State x) const noexcept
    {
        switch (mode_) {
        case Mode::async:
            return x.bits() ^ table_[x.bits()];
        case Mode::general:
            return 0;
        default:
            return 1;
        }
    }

    bool next(State x, std::uint64_t& cursor, Transition& out) const noexcept
    {
        switch (mode_) {
        case Mode::async: {
            if (cursor == 0)
                return false;
            auto bit = static_cast<std::uint32_t>(cursor & (0 - cursor));
            cursor &= cursor - 1;
            out = {State{x.bits() ^ bit}, AutomatonSet{bit}};
            return true;
        }
        case Mode::general: {
            std::uint64_t u = x.bits() ^ table_[x.bits()];
            auto d = (cursor - u) & u;
            if (d == 0)
                return false;
            cursor = d;
            out = {State{x.bits() ^ static_cast<std::uint32_t>(d)}, AutomatonSet{static_cast<std::uint32_t>(d)}};
            return true;
        }
        default: {
            if (cursor == 0)
                return false;
            cursor = 0;
            State y{table_[x.bits()]};
            out = {y, difference(x, y)};
            return true;
        }
        }
    }

    template <class Fn>
    void for_each_successor(State x, Fn&& fn) const
    {
        Transition t;
        for (auto c = begin(x); next(x, c, t);)
            fn(t);
    }

private:
    Semantics(Mode mode, std::size_t n, std::vector<std::uint32_t> table)
        : mode_(mode), n_(n), table_(std::move(table))
    {
    }

    Mode mode_;
    std::size_t n_;
    std::vector<std::uint32_t> table_;
};

// ---------------------------------------------------------------------------
// Materialized graphs

struct Edge
{
    State source;
    State target;
    AutomatonSet label;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A fully enumerated transition relation. Edges are ordered by source (in
/// State order), then by label mask.
struct TransitionGraph
{
    std::size_t n = 0;
    Mode mode = Mode::async;
    std::optional<BlockSchedule> schedule;
    std::vector<Edge> edges;
};

struct BuildOptions
{
    /// Overrides the mode's default cap.
    std::optional<std::size_t> max_n;
    /// Emit the vacuous (x, x) pair of every state in general mode.
    bool emit_self_loops = false;
};

inline std::size_t default_cap(Mode m)
{
    return m == Mode::general ? default_general_cap : default_state_cap;
}

inline Semantics make_semantics(const Ban& b, Mode mode, const std::optional<BlockSchedule>& schedule,
                                std::optional<std::size_t> max_n = std::nullopt)
{
    auto cap = max_n.value_or(default_cap(mode));
    require_cap(b.size(), cap);
    GlobalMap f(b, cap);
    switch (mode) {
    case Mode::parallel:
        return Semantics::parallel(f);
    case Mode::async:
        return Semantics::async(f);
    case Mode::general:
        return Semantics::general(f);
    case Mode::bsus:
        if (!schedule)
            throw validation_error("bsus mode needs a block schedule");
        return Semantics::bsus(f, *schedule);
    }
    throw validation_error("unknown mode");
}

inline TransitionGraph build_graph(const Semantics& sem, bool emit_self_loops = false)
{
    TransitionGraph g;
    g.n = sem.size();
    g.mode = sem.mode();
    for (std::uint64_t k = 0; k < sem.states(); ++k) {
        auto x = nth_state(k, sem.size());
        if (emit_self_loops && sem.mode() == Mode::general)
            g.edges.push_back({x, x, AutomatonSet{}});
        sem.for_each_successor(x, [&](const Transition& t) { g.edges.push_back({x, t.target, t.label}); });
    }
    return g;
}

inline TransitionGraph build_graph(const Ban& b, Mode mode, const std::optional<BlockSchedule>& schedule = std::nullopt,
                                   const BuildOptions& options = {})
{
    auto g = build_graph(make_semantics(b, mode, schedule, options.max_n), options.emit_self_loops);
    g.schedule = schedule;
    return g;
}

/// `1100 -> 0000 [{0,1}]`, one edge per line.
inline std::string to_edge_list(const TransitionGraph& g)
{
    std::string out;
    for (const auto& e : g.edges)
        out += to_string(e.source, g.n) + " -> " + to_string(e.target, g.n) + " [" + e.label.to_string() + "]\n";
    return out;
}

inline std::string to_dot(const TransitionGraph& g)
{
    std::string out = "digraph transitions {\n";
    out += "  // mode=" + std::string(to_string(g.mode)) + "\n";
    for (std::uint64_t k = 0; k < state_count(g.n); ++k)
        out += "  \"" + to_string(nth_state(k, g.n), g.n) + "\";\n";
    for (const auto& e : g.edges)
        out += "  \"" + to_string(e.source, g.n) + "\" -> \"" + to_string(e.target, g.n) + "\" [label=\"" +
               e.label.to_string() + "\"];\n";
    out += "}\n";
    return out;
}

// ---------------------------------------------------------------------------
// Non-expansivity

struct NonExpansiveVerdict
{
    bool holds = true;
    /// First violating pair x < y, in State order.
    std::optional<std::pair<State, State>> counterexample;
};

/// Checks that the Hamming distance never grows under F, over all pairs.
inline NonExpansiveVerdict check_nonexpansive(const Ban& b, std::size_t cap = default_pair_cap)
{
    require_cap(b.size(), cap);
    GlobalMap f(b, cap);
    const auto& t = f.table();
    const auto n = b.size();
    for (std::uint64_t i = 0; i < t.size(); ++i) {
        auto x = nth_state(i, n).bits();
        for (std::uint64_t j = i + 1; j < t.size(); ++j) {
            auto y = nth_state(j, n).bits();
            if (std::popcount(x ^ y) < std::popcount(t[x] ^ t[y]))
                return {false, std::pair{State{x}, State{y}}};
        }
    }
    return {};
}

} // namespace banet
