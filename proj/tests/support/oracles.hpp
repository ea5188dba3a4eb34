#pragma once

// Brute-force reference computations. These go straight from the
// definitions, formula by formula, and share no code path with the
// tabulated or bit-parallel implementations they check.

#include <banet/formula.hpp>
#include <banet/network.hpp>
#include <banet/state.hpp>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace banet::testing {

inline std::vector<State> all_states(std::size_t n)
{
    std::vector<State> out;
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << n); ++x)
        out.push_back(State{x});
    return out;
}

inline bool depends_by_flips(const Formula& f, std::size_t i, std::size_t n)
{
    for (auto x : all_states(n))
        if (eval(f, x) != eval(f, x.flipped(i)))
            return true;
    return false;
}

struct FlipWitnesses
{
    bool rising = false;
    bool falling = false;
};

inline FlipWitnesses flip_witnesses(const Formula& f, std::size_t i, std::size_t n)
{
    FlipWitnesses w;
    for (auto x : all_states(n)) {
        if (x[i])
            continue;
        bool lo = eval(f, x);
        bool hi = eval(f, x.with(i, true));
        w.rising |= !lo && hi;
        w.falling |= lo && !hi;
    }
    return w;
}

inline std::vector<std::size_t> unstable_by_eval(const Ban& b, State x)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (eval(b.function(i), x) != x[i])
            out.push_back(i);
    return out;
}

enum class Relation { parallel, async, general };

/// Successors straight from the relation definitions (no self-pairs).
inline std::vector<State> relation_successors(const Ban& b, State x, Relation r)
{
    std::vector<State> out;
    auto u = unstable_by_eval(b, x);
    if (r == Relation::parallel) {
        State y;
        for (std::size_t i = 0; i < b.size(); ++i)
            y = y.with(i, eval(b.function(i), x));
        out.push_back(y);
    } else if (r == Relation::async) {
        for (auto i : u)
            out.push_back(x.flipped(i));
    } else {
        // every y != x whose differing automata are all unstable in x
        for (auto y : all_states(b.size())) {
            if (y == x)
                continue;
            bool ok = true;
            for (std::size_t i = 0; i < b.size(); ++i)
                if (x[i] != y[i] && std::find(u.begin(), u.end(), i) == u.end())
                    ok = false;
            if (ok)
                out.push_back(y);
        }
    }
    return out;
}

/// reach[x] = every state reachable from x (x included).
inline std::vector<std::vector<bool>> reachability_closure(const Ban& b, Relation r)
{
    auto states = all_states(b.size());
    std::vector<std::vector<bool>> reach(states.size(), std::vector<bool>(states.size(), false));
    for (auto x : states) {
        std::vector<std::uint32_t> stack{x.bits()};
        reach[x.bits()][x.bits()] = true;
        while (!stack.empty()) {
            State y{stack.back()};
            stack.pop_back();
            for (auto z : relation_successors(b, y, r))
                if (!reach[x.bits()][z.bits()]) {
                    reach[x.bits()][z.bits()] = true;
                    stack.push_back(z.bits());
                }
        }
    }
    return reach;
}

/// Terminal SCCs by the O(4^n) definition: x lies in a terminal SCC iff
/// every state reachable from x reaches x back.
inline std::set<std::vector<State>> naive_terminal_sccs(const Ban& b, Relation r)
{
    auto reach = reachability_closure(b, r);
    auto states = all_states(b.size());
    std::set<std::vector<State>> out;
    for (auto x : states) {
        bool terminal = true;
        std::vector<State> members;
        for (auto y : states) {
            if (!reach[x.bits()][y.bits()])
                continue;
            if (!reach[y.bits()][x.bits()])
                terminal = false;
            members.push_back(y);
        }
        if (terminal) {
            std::sort(members.begin(), members.end());
            out.insert(members);
        }
    }
    return out;
}

} // namespace banet::testing
