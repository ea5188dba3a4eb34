#pragma once

#include <banet/error.hpp>
#include <banet/network.hpp>
#include <banet/state.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace banet {

/// Block-sequential update schedule: blocks are applied in order, the
/// automata of a block are updated simultaneously, and every automaton
/// belongs to exactly one block.
class BlockSchedule
{
public:
    BlockSchedule(std::size_t n, std::vector<AutomatonSet> blocks) : n_(n), blocks_(std::move(blocks))
    {
        AutomatonSet seen;
        for (auto b : blocks_) {
            if (b.empty())
                throw validation_error("schedule blocks must be non-empty");
            if (!(b & seen).empty())
                throw validation_error("schedule blocks must be disjoint");
            if (!b.subset_of(AutomatonSet::all(n_)))
                throw validation_error("schedule references an automaton outside the network");
            seen = seen | b;
        }
        if (seen != AutomatonSet::all(n_))
            throw validation_error("schedule must update every automaton exactly once");
    }

    static BlockSchedule parallel(std::size_t n) { return BlockSchedule(n, {AutomatonSet::all(n)}); }

    /// One singleton block per automaton, in the given order.
    static BlockSchedule sequential(std::size_t n, const std::vector<std::size_t>& order)
    {
        std::vector<AutomatonSet> blocks;
        for (auto i : order)
            blocks.push_back(AutomatonSet::of({i}));
        return BlockSchedule(n, std::move(blocks));
    }

    std::size_t size() const noexcept { return n_; }
    const std::vector<AutomatonSet>& blocks() const noexcept { return blocks_; }

    /// Position of the block containing automaton i.
    std::size_t rank(std::size_t i) const
    {
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            if (blocks_[k].contains(i))
                return k;
        throw validation_error("automaton not scheduled");
    }

    friend bool operator==(const BlockSchedule&, const BlockSchedule&) = default;

private:
    std::size_t n_;
    std::vector<AutomatonSet> blocks_;
};

/// Parses `{a,b}{c}` using the network's automaton names.
inline BlockSchedule parse_block_schedule(std::string_view text, const Ban& b)
{
    std::vector<AutomatonSet> blocks;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    auto fail = [&](const std::string& msg) -> void { throw parse_error(msg, 1, pos + 1); };
    skip();
    while (pos < text.size()) {
        if (text[pos] != '{')
            fail("expected '{'");
        ++pos;
        AutomatonSet block;
        for (;;) {
            skip();
            auto start = pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            if (start == pos)
                fail("expected automaton name");
            auto name = text.substr(start, pos - start);
            auto i = b.index_of(name);
            if (!i) {
                pos = start;
                fail("unknown automaton '" + std::string(name) + "'");
            }
            if (block.contains(*i))
                fail("automaton '" + std::string(name) + "' repeated in block");
            block.insert(*i);
            skip();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == '}') {
                ++pos;
                break;
            }
            fail("expected ',' or '}'");
        }
        blocks.push_back(block);
        skip();
    }
    if (blocks.empty())
        fail("empty schedule");
    return BlockSchedule(b.size(), std::move(blocks));
}

inline std::string to_string(const BlockSchedule& s, const NameFn& name = indexed_name)
{
    std::string out;
    for (auto block : s.blocks()) {
        out += '{';
        bool first = true;
        for (auto i : block.members()) {
            if (!first)
                out += ',';
            out += name(i);
            first = false;
        }
        out += '}';
    }
    return out;
}

/// One period of a block-sequential schedule, evaluated formula by formula.
inline State period_function(const Ban& b, const BlockSchedule& s, State x)
{
    if (s.size() != b.size())
        throw validation_error("schedule and network sizes differ");
    for (auto block : s.blocks()) {
        State next = x;
        for (auto i : block.members())
            next = next.with(i, eval(b.function(i), x));
        x = next;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Arc labelings

struct NuEntry
{
    std::size_t source;
    std::size_t target;
    /// -1: source is updated strictly before target; +1 otherwise.
    int value;

    friend bool operator==(const NuEntry&, const NuEntry&) = default;
};

/// nu: A -> {-1,+1}, sorted by (source, target).
class NuLabeling
{
public:
    NuLabeling() = default;
    explicit NuLabeling(std::vector<NuEntry> entries) : entries_(std::move(entries))
    {
        std::ranges::sort(entries_, [](const NuEntry& a, const NuEntry& b) {
            return std::pair(a.source, a.target) < std::pair(b.source, b.target);
        });
        for (std::size_t k = 0; k < entries_.size(); ++k) {
            if (entries_[k].value != 1 && entries_[k].value != -1)
                throw validation_error("nu values must be -1 or +1");
            if (k > 0 && entries_[k - 1].source == entries_[k].source && entries_[k - 1].target == entries_[k].target)
                throw validation_error("nu labels an arc twice");
        }
    }

    /// Constant labeling over the arcs of g.
    static NuLabeling uniform(const SignedDigraph& g, int value)
    {
        std::vector<NuEntry> e;
        for (const auto& a : g.arcs())
            e.push_back({a.source, a.target, value});
        return NuLabeling(std::move(e));
    }

    const std::vector<NuEntry>& entries() const noexcept { return entries_; }

    std::optional<int> at(std::size_t i, std::size_t j) const
    {
        for (const auto& e : entries_)
            if (e.source == i && e.target == j)
                return e.value;
        return std::nullopt;
    }

    bool same_domain(const NuLabeling& other) const
    {
        return std::ranges::equal(entries_, other.entries_, [](const NuEntry& a, const NuEntry& b) {
            return a.source == b.source && a.target == b.target;
        });
    }

    friend bool operator==(const NuLabeling&, const NuLabeling&) = default;

private:
    std::vector<NuEntry> entries_;
};

inline NuLabeling blocks_to_nu(const BlockSchedule& s, const SignedDigraph& g)
{
    if (s.size() != g.size())
        throw validation_error("schedule must cover exactly the automata of the interaction graph");
    std::vector<NuEntry> entries;
    for (const auto& a : g.arcs())
        entries.push_back({a.source, a.target, s.rank(a.source) < s.rank(a.target) ? -1 : 1});
    return NuLabeling(std::move(entries));
}

inline bool nu_equivalent(const NuLabeling& a, const NuLabeling& b)
{
    if (!a.same_domain(b))
        throw validation_error("labelings are defined on different arc sets");
    return a == b;
}

/// Heuristic synchronism measure: the number of arcs labeled +1.
inline std::size_t degree_of_synchronism(const NuLabeling& nu)
{
    return static_cast<std::size_t>(
        std::ranges::count_if(nu.entries(), [](const NuEntry& e) { return e.value == 1; }));
}

/// rank(before) < rank(after) when strict, rank(before) <= rank(after) otherwise.
struct RankConstraint
{
    std::size_t before;
    std::size_t after;
    bool strict;

    friend bool operator==(const RankConstraint&, const RankConstraint&) = default;
};

/// A cycle of rank constraints containing at least one strict inequality.
struct InfeasibleNu
{
    std::vector<RankConstraint> cycle;
};

using NuRealization = std::variant<BlockSchedule, InfeasibleNu>;

/// Finds the block schedule with the fewest blocks whose labeling is nu, or a
/// contradictory constraint cycle. Each arc contributes one difference
/// constraint; ranks are the longest-path solution from 0, which is the
/// pointwise least solution and therefore uses the fewest distinct ranks.
inline NuRealization nu_realizable(const NuLabeling& nu, std::size_t n)
{
    std::vector<RankConstraint> constraints;
    for (const auto& e : nu.entries()) {
        if (e.source >= n || e.target >= n)
            throw validation_error("labeling references an automaton outside the network");
        if (e.value == -1)
            constraints.push_back({e.source, e.target, true});
        else
            constraints.push_back({e.target, e.source, false});
    }

    // reach[u][v]: v reachable from u through constraint edges
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& c : constraints)
        reach[c.before][c.after] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t u = 0; u < n; ++u)
            if (reach[u][k])
                for (std::size_t v = 0; v < n; ++v)
                    if (reach[k][v])
                        reach[u][v] = true;

    for (const auto& strict : constraints) {
        if (!strict.strict || !reach[strict.after][strict.before])
            continue;
        // shortest constraint path back from strict.after to strict.before
        std::vector<std::optional<std::size_t>> via(n);
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{strict.after};
        seen[strict.after] = true;
        while (!queue.empty() && !seen[strict.before]) {
            auto u = queue.front();
            queue.pop_front();
            for (std::size_t k = 0; k < constraints.size(); ++k) {
                const auto& c = constraints[k];
                if (c.before == u && !seen[c.after]) {
                    seen[c.after] = true;
                    via[c.after] = k;
                    queue.push_back(c.after);
                }
            }
        }
        std::vector<RankConstraint> back;
        for (auto v = strict.before; v != strict.after;) {
            const auto& c = constraints[*via[v]];
            back.push_back(c);
            v = c.before;
        }
        InfeasibleNu witness{{strict}};
        witness.cycle.insert(witness.cycle.end(), back.rbegin(), back.rend());
        return witness;
    }

    std::vector<std::size_t> rank(n, 0);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& c : constraints) {
            auto need = rank[c.before] + (c.strict ? 1 : 0);
            if (rank[c.after] < need) {
                rank[c.after] = need;
                changed = true;
            }
        }
    }
    std::size_t top = n == 0 ? 0 : *std::ranges::max_element(rank);
    std::vector<AutomatonSet> blocks(top + 1);
    for (std::size_t i = 0; i < n; ++i)
        blocks[rank[i]].insert(i);
    return BlockSchedule(n, std::move(blocks));
}

} // namespace banet
