#pragma once

#include <banet/attractor.hpp>
#include <banet/dynamics.hpp>
#include <banet/error.hpp>
#include <banet/formula.hpp>
#include <banet/network.hpp>
#include <banet/state.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace banet {

/// Default largest network for per-state reachability analyses.
inline constexpr std::size_t default_sensitivity_cap = 12;

// ---------------------------------------------------------------------------
// Synchronous transitions

enum class SyncEffect { shortcut, lasting };

inline std::string_view to_string(SyncEffect e)
{
    return e == SyncEffect::shortcut ? "shortcut" : "lasting";
}

/// A synchronous transition x -> x^D (|D| >= 2, D within U(x)). It is a
/// shortcut when the asynchronous graph already leads from x to x^D.
struct SyncTransitionVerdict
{
    State source;
    State target;
    AutomatonSet update_set;
    SyncEffect verdict;

    friend bool operator==(const SyncTransitionVerdict&, const SyncTransitionVerdict&) = default;
};

/// Every synchronous transition, ordered by (source, update-set mask).
inline std::vector<SyncTransitionVerdict> classify_sync_transitions(const GlobalMap& f)
{
    const auto total = f.states();
    auto async = Semantics::async(f);
    std::vector<std::uint32_t> stamp(total, 0);
    std::vector<std::uint32_t> queue;
    std::vector<SyncTransitionVerdict> out;
    std::uint32_t generation = 0;

    for (std::uint64_t xi = 0; xi < total; ++xi) {
        State x{static_cast<std::uint32_t>(xi)};
        auto u = std::uint64_t{f.unstable(x).mask()};
        if (std::popcount(u) < 2)
            continue;

        ++generation;
        queue.assign(1, x.bits());
        stamp[x.bits()] = generation;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            async.for_each_successor(State{queue[head]}, [&](const Transition& t) {
                if (stamp[t.target.bits()] != generation) {
                    stamp[t.target.bits()] = generation;
                    queue.push_back(t.target.bits());
                }
            });
        }

        for (std::uint64_t d = (0 - u) & u; d != 0; d = (d - u) & u) {
            if (std::popcount(d) < 2)
                continue;
            AutomatonSet set{static_cast<std::uint32_t>(d)};
            auto y = x.flipped(set);
            out.push_back({x, y, set, stamp[y.bits()] == generation ? SyncEffect::shortcut : SyncEffect::lasting});
        }
    }
    return out;
}

inline std::vector<SyncTransitionVerdict> classify_sync_transitions(const Ban& b,
                                                                    std::size_t cap = default_sensitivity_cap)
{
    return classify_sync_transitions(GlobalMap(b, cap));
}

struct SensitivityVerdict
{
    /// The terminal-SCC families of the asynchronous and general graphs differ.
    bool sensitive = false;
    AttractorReport async_attractors;
    AttractorReport general_attractors;
    /// State sets that are attractors in one graph but not the other.
    std::vector<std::vector<State>> only_async;
    std::vector<std::vector<State>> only_general;
    std::vector<SyncTransitionVerdict> lasting;
    std::size_t shortcut_count = 0;
};

inline SensitivityVerdict is_synchronism_sensitive(const Ban& b, std::size_t cap = default_sensitivity_cap)
{
    require_cap(b.size(), cap);
    GlobalMap f(b, cap);
    SensitivityVerdict v;
    v.async_attractors = terminal_sccs(Semantics::async(f), f);
    v.general_attractors = terminal_sccs(Semantics::general(f), f);

    std::set<std::vector<State>> in_async;
    std::set<std::vector<State>> in_general;
    for (const auto& a : v.async_attractors.attractors)
        in_async.insert(a.states);
    for (const auto& a : v.general_attractors.attractors)
        in_general.insert(a.states);
    std::ranges::set_difference(in_async, in_general, std::back_inserter(v.only_async));
    std::ranges::set_difference(in_general, in_async, std::back_inserter(v.only_general));
    v.sensitive = in_async != in_general;

    for (const auto& t : classify_sync_transitions(f)) {
        if (t.verdict == SyncEffect::lasting)
            v.lasting.push_back(t);
        else
            ++v.shortcut_count;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Precedence

/// Constraints "u before v": whenever v is updated, u is first refreshed to
/// its own (effective) function of the current state.
class PrecedenceSpec
{
public:
    struct Constraint
    {
        std::size_t before;
        std::size_t after;

        friend auto operator<=>(const Constraint&, const Constraint&) = default;
    };

    PrecedenceSpec() = default;

    PrecedenceSpec(std::size_t n, std::vector<Constraint> constraints) : n_(n), constraints_(std::move(constraints))
    {
        for (const auto& c : constraints_)
            if (c.before >= n_ || c.after >= n_)
                throw validation_error("precedence references an automaton outside the network");
        if (auto cycle = find_cycle())
            throw validation_error("precedence constraints are cyclic through automaton " + std::to_string(*cycle));
    }

    std::size_t size() const noexcept { return n_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    bool empty() const noexcept { return constraints_.empty(); }

    /// Automata that must be refreshed before v, ascending and deduplicated.
    std::vector<std::size_t> predecessors(std::size_t v) const
    {
        std::vector<std::size_t> out;
        for (const auto& c : constraints_)
            if (c.after == v)
                out.push_back(c.before);
        std::ranges::sort(out);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    std::optional<std::size_t> find_cycle() const
    {
        // 0 white, 1 grey, 2 black
        std::vector<int> colour(n_, 0);
        for (std::size_t s = 0; s < n_; ++s) {
            if (colour[s] != 0)
                continue;
            std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
            colour[s] = 1;
            while (!stack.empty()) {
                auto& [v, k] = stack.back();
                if (k < constraints_.size()) {
                    const auto& c = constraints_[k++];
                    if (c.before != v)
                        continue;
                    if (colour[c.after] == 1)
                        return c.after;
                    if (colour[c.after] == 0) {
                        colour[c.after] = 1;
                        stack.push_back({c.after, 0});
                    }
                } else {
                    colour[v] = 2;
                    stack.pop_back();
                }
            }
        }
        return std::nullopt;
    }

    std::size_t n_ = 0;
    std::vector<Constraint> constraints_;
};

/// Parses `u<v,w<v` against the network's names. Empty text is the empty spec.
inline PrecedenceSpec parse_precedence(std::string_view text, const Ban& b)
{
    std::vector<PrecedenceSpec::Constraint> constraints;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    auto name = [&]() -> std::size_t {
        skip();
        auto start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (start == pos)
            throw parse_error("expected automaton name", 1, pos + 1);
        auto id = text.substr(start, pos - start);
        if (auto i = b.index_of(id))
            return *i;
        throw parse_error("unknown automaton '" + std::string(id) + "'", 1, start + 1);
    };
    skip();
    while (pos < text.size()) {
        auto u = name();
        skip();
        if (pos >= text.size() || text[pos] != '<')
            throw parse_error("expected '<'", 1, pos + 1);
        ++pos;
        auto v = name();
        constraints.push_back({u, v});
        skip();
        if (pos < text.size()) {
            if (text[pos] != ',')
                throw parse_error("expected ','", 1, pos + 1);
            ++pos;
            skip();
            if (pos >= text.size())
                throw parse_error("dangling ','", 1, pos + 1);
        }
    }
    return PrecedenceSpec(b.size(), std::move(constraints));
}

namespace detail {

inline const Formula& effective(const Ban& b, const PrecedenceSpec& p, std::size_t v,
                                std::vector<std::optional<Formula>>& memo)
{
    if (!memo[v]) {
        auto preds = p.predecessors(v);
        std::vector<std::optional<Formula>> replacement(b.size());
        for (auto u : preds)
            replacement[u] = effective(b, p, u, memo);
        memo[v] = fold_constants(substitute(b.function(v), [&](std::size_t i) { return replacement[i]; }));
    }
    return *memo[v];
}

} // namespace detail

/// f_v with each x_u (u before v) replaced by u's effective function, then
/// constant-folded.
inline Formula effective_function(const Ban& b, const PrecedenceSpec& p, std::size_t v)
{
    if (p.size() != b.size() && !p.empty())
        throw validation_error("precedence and network sizes differ");
    if (v >= b.size())
        throw validation_error("automaton index out of range");
    if (p.empty())
        return b.function(v);
    std::vector<std::optional<Formula>> memo(b.size());
    return detail::effective(b, p, v, memo);
}

/// The network obtained by replacing every f_v with its effective function.
inline Ban apply_precedence(const Ban& b, const PrecedenceSpec& p)
{
    std::vector<Formula> fs;
    for (std::size_t v = 0; v < b.size(); ++v)
        fs.push_back(effective_function(b, p, v));
    return Ban(b.names(), std::move(fs));
}

struct EmulationMismatch
{
    std::string automaton;
    /// Visible state, one character per visible automaton in host order.
    std::string visible_state;
    bool target_value;
    bool host_value;
};

struct EmulationVerdict
{
    bool equivalent = true;
    /// Names of the visible automata, host order.
    std::vector<std::string> visible;
    /// Effective host functions of the visible automata, printed with host names.
    std::vector<std::string> effective;
    std::optional<EmulationMismatch> witness;
};

/// Checks that the host, driven under the precedence spec and observed only
/// on its visible automata, computes the target's local functions. Automata
/// are matched by name; hidden names are ignored on both sides. Comparison is
/// by truth table.
inline EmulationVerdict emulation_equivalent(const Ban& target, const Ban& host, const PrecedenceSpec& p,
                                             const std::vector<std::string>& hidden,
                                             std::size_t cap = default_state_cap)
{
    require_cap(host.size(), cap);
    require_cap(target.size(), cap);
    AutomatonSet hidden_host;
    AutomatonSet hidden_target;
    for (const auto& h : hidden) {
        hidden_host.insert(host.require_index(h));
        if (auto t = target.index_of(h))
            hidden_target.insert(*t);
    }

    EmulationVerdict verdict;
    std::vector<std::size_t> visible_host;
    std::vector<std::size_t> visible_target;
    for (std::size_t i = 0; i < host.size(); ++i) {
        if (hidden_host.contains(i))
            continue;
        auto t = target.index_of(host.name(i));
        if (!t || hidden_target.contains(*t))
            throw validation_error("visible host automaton '" + host.name(i) + "' has no counterpart in the target");
        visible_host.push_back(i);
        visible_target.push_back(*t);
        verdict.visible.push_back(host.name(i));
    }
    if (visible_target.size() + hidden_target.size() != target.size())
        throw validation_error("target has automata that are neither visible in the host nor hidden");

    std::vector<TruthTable> host_tables;
    std::vector<TruthTable> target_tables;
    for (std::size_t k = 0; k < visible_host.size(); ++k) {
        auto eff = effective_function(host, p, visible_host[k]);
        verdict.effective.push_back(print(eff, host.namer()));
        host_tables.emplace_back(eff, host.size());
        if (!(semantic_deps(host_tables.back()) & hidden_host).empty())
            throw validation_error("hidden automaton survives in the effective function of '" +
                                   host.name(visible_host[k]) + "'");
        target_tables.emplace_back(target.function(visible_target[k]), target.size());
        if (!(semantic_deps(target_tables.back()) & hidden_target).empty())
            throw validation_error("target function of '" + host.name(visible_host[k]) +
                                   "' depends on a hidden automaton");
    }

    const auto m = visible_host.size();
    for (std::size_t k = 0; k < m; ++k) {
        for (std::uint64_t s = 0; s < state_count(m); ++s) {
            State hx;
            State tx;
            for (std::size_t q = 0; q < m; ++q) {
                bool bit = (s >> q) & 1u;
                hx = hx.with(visible_host[q], bit);
                tx = tx.with(visible_target[q], bit);
            }
            bool hv = host_tables[k][hx];
            bool tv = target_tables[k][tx];
            if (hv != tv) {
                verdict.equivalent = false;
                verdict.witness = EmulationMismatch{verdict.visible[k],
                                                    to_string(State{static_cast<std::uint32_t>(s)}, m), tv, hv};
                return verdict;
            }
        }
    }
    return verdict;
}

} // namespace banet
