#pragma once

#include <banet/dynamics.hpp>
#include <banet/error.hpp>
#include <banet/network.hpp>
#include <banet/schedule.hpp>
#include <banet/state.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace banet {

enum class AttractorKind { fixed_point, limit_cycle, terminal_scc };

struct Attractor
{
    /// Members, ascending.
    std::vector<State> states;
    AttractorKind kind = AttractorKind::terminal_scc;
    /// |U(x)| of every member, ascending.
    std::vector<std::size_t> instability_profile;
    /// States from which the attractor is reachable (including its own).
    std::uint64_t basin_size = 0;

    std::size_t size() const noexcept { return states.size(); }
    State min_state() const { return states.front(); }
};

struct AttractorReport
{
    std::size_t n = 0;
    Mode mode = Mode::async;
    /// Sorted by (size, smallest member).
    std::vector<Attractor> attractors;
    /// True when some state reaches more than one attractor.
    bool basins_overlap = false;
};

/// |U(x)| for each state, ascending.
inline std::vector<std::size_t> instability_profile(const GlobalMap& f, std::span<const State> states)
{
    std::vector<std::size_t> out;
    out.reserve(states.size());
    for (auto x : states)
        out.push_back(f.unstable(x).size());
    std::ranges::sort(out);
    return out;
}

inline std::vector<std::size_t> instability_profile(const Ban& b, std::span<const State> states)
{
    std::vector<std::size_t> out;
    out.reserve(states.size());
    for (auto x : states)
        out.push_back(unstable_set(b, x).size());
    std::ranges::sort(out);
    return out;
}

/// |U| along a path of states.
inline std::vector<std::size_t> instability_trace(const GlobalMap& f, std::span<const State> path)
{
    std::vector<std::size_t> out;
    for (auto x : path)
        out.push_back(f.unstable(x).size());
    return out;
}

inline std::vector<State> fixed_points(const GlobalMap& f)
{
    std::vector<State> out;
    for (std::uint64_t x = 0; x < f.states(); ++x)
        if (f.table()[x] == x)
            out.push_back(State{static_cast<std::uint32_t>(x)});
    return out;
}

inline std::vector<State> fixed_points(const Ban& b, std::size_t cap = default_state_cap)
{
    return fixed_points(GlobalMap(b, cap));
}

namespace detail {

inline void sort_report(AttractorReport& r)
{
    std::ranges::sort(r.attractors, [](const Attractor& a, const Attractor& b) {
        return a.size() != b.size() ? a.size() < b.size() : a.min_state() < b.min_state();
    });
}

inline AttractorKind classify(const GlobalMap& f, const std::vector<State>& states, bool deterministic)
{
    if (states.size() == 1 && f.unstable(states.front()).empty())
        return AttractorKind::fixed_point;
    return deterministic ? AttractorKind::limit_cycle : AttractorKind::terminal_scc;
}

// Edge list in compressed form, exposing the same cursor protocol as
// Semantics.
class CsrGraph
{
public:
    explicit CsrGraph(const TransitionGraph& g) : offsets_(state_count(g.n) + 1, 0)
    {
        for (const auto& e : g.edges)
            ++offsets_[e.source.bits() + 1];
        for (std::size_t k = 1; k < offsets_.size(); ++k)
            offsets_[k] += offsets_[k - 1];
        targets_.resize(g.edges.size());
        auto fill = offsets_;
        for (const auto& e : g.edges)
            targets_[fill[e.source.bits()]++] = e.target.bits();
    }

    std::uint64_t states() const noexcept { return offsets_.size() - 1; }
    std::uint64_t begin(State x) const noexcept { return offsets_[x.bits()]; }

    bool next(State x, std::uint64_t& cursor, Transition& out) const noexcept
    {
        if (cursor == offsets_[x.bits() + 1])
            return false;
        State y{targets_[cursor++]};
        out = {y, difference(x, y)};
        return true;
    }

    template <class Fn>
    void for_each_successor(State x, Fn&& fn) const
    {
        Transition t;
        for (auto c = begin(x); next(x, c, t);)
            fn(t);
    }

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> targets_;
};

// Iterative Tarjan over every state. Components complete in reverse
// topological order, so when a component is popped every component it can
// reach is already known; that is where terminality and attractor
// reachability are settled.
template <class Graph>
AttractorReport tarjan_attractors(const Graph& graph, const GlobalMap& f, Mode mode, bool deterministic)
{
    constexpr std::uint32_t unvisited = 0;
    constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
    const auto total = graph.states();

    std::vector<std::uint32_t> index(total, unvisited);
    std::vector<std::uint32_t> low(total, 0);
    std::vector<std::uint32_t> component(total, none);
    std::vector<std::uint32_t> scc_stack;
    std::uint32_t next_index = 1;

    // Attractors reachable from each completed component, as sorted ids.
    std::vector<std::vector<std::uint32_t>> reaches;
    AttractorReport report;
    report.n = f.size();
    report.mode = mode;

    struct Frame
    {
        std::uint32_t state;
        std::uint64_t cursor;
    };
    std::vector<Frame> calls;

    for (std::uint64_t root = 0; root < total; ++root) {
        if (index[root] != unvisited)
            continue;
        auto enter = [&](std::uint32_t v) {
            index[v] = low[v] = next_index++;
            scc_stack.push_back(v);
            calls.push_back({v, graph.begin(State{v})});
        };
        enter(static_cast<std::uint32_t>(root));

        while (!calls.empty()) {
            auto& frame = calls.back();
            auto v = frame.state;
            Transition t;
            if (graph.next(State{v}, frame.cursor, t)) {
                auto w = t.target.bits();
                if (index[w] == unvisited)
                    enter(w);
                else if (component[w] == none)
                    low[v] = std::min(low[v], index[w]);
                continue;
            }

            calls.pop_back();
            if (!calls.empty()) {
                auto parent = calls.back().state;
                low[parent] = std::min(low[parent], low[v]);
            }
            if (low[v] != index[v])
                continue;

            auto id = static_cast<std::uint32_t>(reaches.size());
            std::vector<State> members;
            std::uint32_t w;
            do {
                w = scc_stack.back();
                scc_stack.pop_back();
                component[w] = id;
                members.push_back(State{w});
            } while (w != v);

            std::vector<std::uint32_t> reach;
            bool leaves = false;
            for (auto x : members) {
                graph.for_each_successor(x, [&](const Transition& e) {
                    auto c = component[e.target.bits()];
                    if (c == id)
                        return;
                    leaves = true;
                    const auto& r = reaches[c];
                    std::vector<std::uint32_t> merged;
                    std::ranges::set_union(reach, r, std::back_inserter(merged));
                    reach = std::move(merged);
                });
            }
            if (!leaves) {
                std::ranges::sort(members);
                Attractor a;
                a.kind = classify(f, members, deterministic);
                a.instability_profile = instability_profile(f, members);
                a.states = std::move(members);
                reach = {static_cast<std::uint32_t>(report.attractors.size())};
                report.attractors.push_back(std::move(a));
            }
            reaches.push_back(std::move(reach));
        }
    }

    // Component sizes and basins.
    std::vector<std::uint64_t> sizes(reaches.size(), 0);
    for (auto c : component)
        ++sizes[c];
    std::uint64_t covered = 0;
    for (std::size_t c = 0; c < reaches.size(); ++c)
        for (auto a : reaches[c]) {
            report.attractors[a].basin_size += sizes[c];
            covered += sizes[c];
        }
    report.basins_overlap = covered > total;
    sort_report(report);
    return report;
}

} // namespace detail

/// Terminal strongly connected components, traversing the implicit relation.
inline AttractorReport terminal_sccs(const Semantics& sem, const GlobalMap& f)
{
    return detail::tarjan_attractors(sem, f, sem.mode(), sem.deterministic());
}

/// Terminal strongly connected components of a materialized graph.
inline AttractorReport terminal_sccs(const TransitionGraph& g, const Ban& b)
{
    if (g.n != b.size())
        throw validation_error("graph and network sizes differ");
    GlobalMap f(b, std::max(g.n, std::size_t{1}));
    bool deterministic = g.mode == Mode::parallel || g.mode == Mode::bsus;
    return detail::tarjan_attractors(detail::CsrGraph(g), f, g.mode, deterministic);
}

/// Cycles of a deterministic semantics' functional graph, found by following
/// each orbit until it meets a visited state.
inline AttractorReport limit_cycles(const Semantics& sem, const GlobalMap& f)
{
    if (!sem.deterministic())
        throw validation_error("limit cycles need a deterministic schedule");
    constexpr std::uint32_t unassigned = std::numeric_limits<std::uint32_t>::max();
    constexpr std::uint32_t on_path = unassigned - 1;
    std::vector<std::uint32_t> owner(sem.states(), unassigned);

    AttractorReport report;
    report.n = f.size();
    report.mode = sem.mode();
    std::vector<std::uint32_t> path;
    for (std::uint64_t start = 0; start < sem.states(); ++start) {
        if (owner[start] != unassigned)
            continue;
        path.clear();
        auto x = static_cast<std::uint32_t>(start);
        while (owner[x] == unassigned) {
            owner[x] = on_path;
            path.push_back(x);
            x = sem.image(State{x}).bits();
        }
        std::uint32_t id;
        if (owner[x] == on_path) {
            id = static_cast<std::uint32_t>(report.attractors.size());
            auto first = std::ranges::find(path, x);
            Attractor a;
            for (auto it = first; it != path.end(); ++it)
                a.states.push_back(State{*it});
            std::ranges::sort(a.states);
            a.kind = detail::classify(f, a.states, true);
            a.instability_profile = instability_profile(f, a.states);
            report.attractors.push_back(std::move(a));
        } else {
            id = owner[x];
        }
        for (auto y : path)
            owner[y] = id;
        report.attractors[id].basin_size += path.size();
    }
    detail::sort_report(report);
    return report;
}

inline AttractorReport limit_cycles(const Ban& b, const BlockSchedule& s, std::size_t cap = default_state_cap)
{
    GlobalMap f(b, cap);
    return limit_cycles(Semantics::bsus(f, s), f);
}

/// Attractors of a network under a mode; deterministic modes use the orbit
/// method, the others Tarjan.
inline AttractorReport analyze_attractors(const Ban& b, Mode mode, const std::optional<BlockSchedule>& schedule = std::nullopt,
                                          std::optional<std::size_t> max_n = std::nullopt)
{
    auto cap = max_n.value_or(default_cap(mode));
    require_cap(b.size(), cap);
    GlobalMap f(b, cap);
    switch (mode) {
    case Mode::parallel:
        return limit_cycles(Semantics::parallel(f), f);
    case Mode::bsus:
        if (!schedule)
            throw validation_error("bsus mode needs a block schedule");
        return limit_cycles(Semantics::bsus(f, *schedule), f);
    case Mode::async:
        return terminal_sccs(Semantics::async(f), f);
    case Mode::general:
        return terminal_sccs(Semantics::general(f), f);
    }
    throw validation_error("unknown mode");
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string to_string(AttractorKind k, std::size_t size)
{
    switch (k) {
    case AttractorKind::fixed_point:
        return "fixed_point";
    case AttractorKind::limit_cycle:
        return "limit_cycle(" + std::to_string(size) + ")";
    case AttractorKind::terminal_scc:
        return "terminal_scc";
    }
    return "";
}

/// `{1:4,2:8}`: four members with one instability, eight with two.
inline std::string render_profile(const std::vector<std::size_t>& profile)
{
    std::map<std::size_t, std::size_t> counts;
    for (auto k : profile)
        ++counts[k];
    std::string out = "{";
    bool first = true;
    for (auto [k, m] : counts) {
        if (!first)
            out += ',';
        out += std::to_string(k) + ":" + std::to_string(m);
        first = false;
    }
    return out + "}";
}

inline std::string render_report(const AttractorReport& r, bool with_states = false)
{
    std::string out = "mode=" + std::string(to_string(r.mode)) + " n=" + std::to_string(r.n) +
                      " attractors=" + std::to_string(r.attractors.size()) + "\n";
    for (std::size_t k = 0; k < r.attractors.size(); ++k) {
        const auto& a = r.attractors[k];
        out += "attractor " + std::to_string(k + 1) + ": kind=" + to_string(a.kind, a.size()) +
               " size=" + std::to_string(a.size()) + " min_state=" + to_string(a.min_state(), r.n) +
               " instabilities=" + render_profile(a.instability_profile) +
               " basin=" + std::to_string(a.basin_size) + "\n";
        if (with_states) {
            out += "  states:";
            for (auto x : a.states)
                out += " " + to_string(x, r.n);
            out += "\n";
        }
    }
    if (r.mode == Mode::async || r.mode == Mode::general)
        out += std::string("basins: reachability, ") + (r.basins_overlap ? "overlapping" : "disjoint") + "\n";
    return out;
}

} // namespace banet
