#pragma once

#include <banet/error.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace banet {

/// Hard upper bound on network size: states are packed into 32-bit words and
/// state spaces are indexed by them.
inline constexpr std::size_t max_automata = 30;

/// A set of automaton indices packed as a bit mask (bit i <=> automaton i).
class AutomatonSet
{
public:
    constexpr AutomatonSet() = default;
    constexpr explicit AutomatonSet(std::uint32_t mask) : mask_(mask) {}

    static AutomatonSet of(std::initializer_list<std::size_t> members)
    {
        AutomatonSet s;
        for (auto i : members)
            s.insert(i);
        return s;
    }

    static constexpr AutomatonSet all(std::size_t n)
    {
        return AutomatonSet{n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1};
    }

    constexpr std::uint32_t mask() const noexcept { return mask_; }
    constexpr bool contains(std::size_t i) const noexcept { return (mask_ >> i) & 1u; }
    constexpr void insert(std::size_t i) noexcept { mask_ |= std::uint32_t{1} << i; }
    constexpr void erase(std::size_t i) noexcept { mask_ &= ~(std::uint32_t{1} << i); }
    constexpr bool empty() const noexcept { return mask_ == 0; }
    constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
    constexpr bool subset_of(AutomatonSet other) const noexcept { return (mask_ & ~other.mask_) == 0; }

    std::vector<std::size_t> members() const
    {
        std::vector<std::size_t> out;
        for (auto m = mask_; m != 0; m &= m - 1)
            out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        return out;
    }

    /// Renders as `{0,1}`; the empty set is `{}`.
    std::string to_string() const
    {
        std::string out = "{";
        bool first = true;
        for (auto i : members()) {
            if (!first)
                out += ',';
            out += std::to_string(i);
            first = false;
        }
        return out + "}";
    }

    friend constexpr auto operator<=>(AutomatonSet, AutomatonSet) = default;
    friend constexpr AutomatonSet operator|(AutomatonSet a, AutomatonSet b) { return AutomatonSet{a.mask_ | b.mask_}; }
    friend constexpr AutomatonSet operator&(AutomatonSet a, AutomatonSet b) { return AutomatonSet{a.mask_ & b.mask_}; }

private:
    std::uint32_t mask_ = 0;
};

namespace detail {

constexpr std::uint32_t reverse_bits(std::uint32_t v) noexcept
{
    v = ((v >> 1) & 0x55555555u) | ((v & 0x55555555u) << 1);
    v = ((v >> 2) & 0x33333333u) | ((v & 0x33333333u) << 2);
    v = ((v >> 4) & 0x0F0F0F0Fu) | ((v & 0x0F0F0F0Fu) << 4);
    v = ((v >> 8) & 0x00FF00FFu) | ((v & 0x00FF00FFu) << 8);
    return (v >> 16) | (v << 16);
}

} // namespace detail

/// A global configuration x in B^n. Bit i holds x_i.
///
/// States order like their printed strings: automaton 0 is the most
/// significant position, so 0011 < 0100 < 1000.
class State
{
public:
    constexpr State() = default;
    constexpr explicit State(std::uint32_t bits) : bits_(bits) {}

    constexpr std::uint32_t bits() const noexcept { return bits_; }
    constexpr bool operator[](std::size_t i) const noexcept { return (bits_ >> i) & 1u; }

    constexpr State flipped(std::size_t i) const noexcept { return State{bits_ ^ (std::uint32_t{1} << i)}; }
    constexpr State flipped(AutomatonSet d) const noexcept { return State{bits_ ^ d.mask()}; }

    constexpr State with(std::size_t i, bool value) const noexcept
    {
        auto bit = std::uint32_t{1} << i;
        return State{value ? (bits_ | bit) : (bits_ & ~bit)};
    }

    friend constexpr bool operator==(State, State) = default;
    friend constexpr std::strong_ordering operator<=>(State a, State b) noexcept
    {
        return detail::reverse_bits(a.bits_) <=> detail::reverse_bits(b.bits_);
    }

private:
    std::uint32_t bits_ = 0;
};

/// The k-th state of B^n in State order.
constexpr State nth_state(std::uint64_t k, std::size_t n) noexcept
{
    return n == 0 ? State{} : State{detail::reverse_bits(static_cast<std::uint32_t>(k)) >> (32 - n)};
}

/// D(x,y): the automata whose state differs between x and y.
constexpr AutomatonSet difference(State x, State y) noexcept
{
    return AutomatonSet{x.bits() ^ y.bits()};
}

constexpr std::size_t hamming(State x, State y) noexcept
{
    return difference(x, y).size();
}

/// Character k is automaton k's bit, so automaton 0 is leftmost.
inline std::string to_string(State x, std::size_t n)
{
    std::string out(n, '0');
    for (std::size_t i = 0; i < n; ++i)
        if (x[i])
            out[i] = '1';
    return out;
}

inline State parse_state(std::string_view text)
{
    if (text.size() > max_automata)
        throw parse_error("state string longer than " + std::to_string(max_automata), 1, 1);
    State x;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            x = x.with(i, true);
        else if (text[i] != '0')
            throw parse_error("expected '0' or '1' in state string", 1, i + 1);
    }
    return x;
}

constexpr std::uint64_t state_count(std::size_t n) noexcept
{
    return std::uint64_t{1} << n;
}

} // namespace banet
