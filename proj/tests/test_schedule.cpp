#include <catch_amalgamated.hpp>

#include <banet/dynamics.hpp>
#include <banet/schedule.hpp>
#include <support/oracles.hpp>
#include <support/random_ban.hpp>

#include <random>

using namespace banet;
using testing::all_states;

namespace {

AutomatonSet range(std::size_t lo, std::size_t hi)
{
    AutomatonSet s;
    for (auto i = lo; i <= hi; ++i)
        s.insert(i);
    return s;
}

// The three schedules of the n-cycle a1..an, 0-based: {n}..{1},
// {6..n}{2..5}{1} and {2..n}{1}.
std::vector<BlockSchedule> cycle_schedules(std::size_t n)
{
    std::vector<std::size_t> reverse;
    for (auto i = n; i-- > 0;)
        reverse.push_back(i);
    return {
        BlockSchedule::sequential(n, reverse),
        BlockSchedule(n, {range(5, n - 1), range(1, 4), range(0, 0)}),
        BlockSchedule(n, {range(1, n - 1), range(0, 0)}),
    };
}

} // namespace

TEST_CASE("block schedule validation")
{
    CHECK_THROWS_AS(BlockSchedule(3, {AutomatonSet::of({0, 1})}), validation_error);
    CHECK_THROWS_AS(BlockSchedule(2, {AutomatonSet::of({0, 1}), AutomatonSet::of({1})}), validation_error);
    CHECK_THROWS_AS(BlockSchedule(2, {AutomatonSet::of({0, 1}), AutomatonSet{}}), validation_error);
    CHECK_THROWS_AS(BlockSchedule(2, {AutomatonSet::of({0, 1, 2})}), validation_error);
    auto s = BlockSchedule::sequential(3, {2, 0, 1});
    CHECK(s.rank(2) == 0);
    CHECK(s.rank(1) == 2);
}

TEST_CASE("parsing block schedules")
{
    auto b = gen_cycle(3, true);
    CHECK(parse_block_schedule("{a1,a2}{a3}", b) == BlockSchedule(3, {AutomatonSet::of({0, 1}), AutomatonSet::of({2})}));
    CHECK(parse_block_schedule(" { a3 } { a1 , a2 } ", b).blocks().front() == AutomatonSet::of({2}));
    CHECK_THROWS_AS(parse_block_schedule("{a1,a2}{a4}", b), parse_error);
    CHECK_THROWS_AS(parse_block_schedule("{a1,a2}", b), validation_error);
    CHECK_THROWS_AS(parse_block_schedule("{a1,a2}{a2,a3}", b), validation_error);
    CHECK_THROWS_AS(parse_block_schedule("{a1,a1}{a2,a3}", b), parse_error);
    CHECK_THROWS_AS(parse_block_schedule("a1,a2,a3", b), parse_error);
    CHECK_THROWS_AS(parse_block_schedule("{a1,a2,a3", b), parse_error);
    CHECK_THROWS_AS(parse_block_schedule("", b), parse_error);
    CHECK(to_string(parse_block_schedule("{a2}{a1,a3}", b), b.namer()) == "{a2}{a1,a3}");
}

TEST_CASE("labelings of the cycle schedules")
{
    for (std::size_t n : {6, 8, 10}) {
        auto g = build_igraph(gen_cycle(n, true));
        auto s = cycle_schedules(n);
        auto nu = blocks_to_nu(s[0], g);
        CHECK(nu.at(n - 1, 0) == -1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            CHECK(nu.at(i, i + 1) == 1);
        CHECK(nu_equivalent(nu, blocks_to_nu(s[1], g)));
        CHECK(nu_equivalent(nu, blocks_to_nu(s[2], g)));
        CHECK_FALSE(nu_equivalent(nu, blocks_to_nu(BlockSchedule::parallel(n), g)));
        CHECK(degree_of_synchronism(nu) == n - 1);
    }
}

TEST_CASE("parallel labels every arc +1")
{
    auto g = build_igraph(gen_figure_ban(Figure::fig2));
    auto nu = blocks_to_nu(BlockSchedule::parallel(4), g);
    CHECK(nu == NuLabeling::uniform(g, 1));
    CHECK(degree_of_synchronism(nu) == g.arcs().size());
    CHECK(degree_of_synchronism(NuLabeling::uniform(g, -1)) == 0);
}

TEST_CASE("labelings on different arc sets cannot be compared")
{
    auto a = blocks_to_nu(BlockSchedule::parallel(3), build_igraph(gen_cycle(3, true)));
    auto b = blocks_to_nu(BlockSchedule::parallel(3), build_igraph(ban_from_definitions({{"a", "b"}, {"b", "c"}, {"c", "a & b"}})));
    CHECK_THROWS_AS(nu_equivalent(a, b), validation_error);
    CHECK_THROWS_AS(NuLabeling({{0, 1, 0}}), validation_error);
    CHECK_THROWS_AS(NuLabeling({{0, 1, 1}, {0, 1, -1}}), validation_error);
}

TEST_CASE("realizing labelings")
{
    auto g = build_igraph(gen_cycle(8, true));
    auto one = nu_realizable(NuLabeling::uniform(g, 1), 8);
    REQUIRE(std::holds_alternative<BlockSchedule>(one));
    CHECK(std::get<BlockSchedule>(one) == BlockSchedule::parallel(8));

    auto nu = blocks_to_nu(cycle_schedules(8)[0], g);
    auto r = nu_realizable(nu, 8);
    REQUIRE(std::holds_alternative<BlockSchedule>(r));
    CHECK(std::get<BlockSchedule>(r) == cycle_schedules(8)[2]);
    CHECK(blocks_to_nu(std::get<BlockSchedule>(r), g) == nu);

    // a before b and b before a
    auto bad = nu_realizable(NuLabeling({{0, 1, -1}, {1, 0, -1}}), 2);
    REQUIRE(std::holds_alternative<InfeasibleNu>(bad));
    auto cycle = std::get<InfeasibleNu>(bad).cycle;
    REQUIRE(cycle.size() == 2);
    CHECK(cycle[0].strict);
    CHECK(cycle[0].after == cycle[1].before);
    CHECK(cycle[1].after == cycle[0].before);

    // every arc of a cycle labelled -1
    auto all_neg = nu_realizable(NuLabeling::uniform(g, -1), 8);
    REQUIRE(std::holds_alternative<InfeasibleNu>(all_neg));
    CHECK(std::get<InfeasibleNu>(all_neg).cycle.size() == 8);
}

TEST_CASE("one period of a schedule")
{
    auto neg3 = gen_cycle(3, true);
    CHECK(period_function(neg3, BlockSchedule::parallel(3), parse_state("000")) == parse_state("100"));
    CHECK(period_function(neg3, BlockSchedule::sequential(3, {0, 1, 2}), parse_state("000")) == parse_state("111"));
    CHECK(period_function(neg3, BlockSchedule::sequential(3, {2, 1, 0}), parse_state("000")) == parse_state("100"));

    auto fig3 = gen_figure_ban(Figure::fig3_right);
    BlockSchedule s(4, {AutomatonSet::of({3}), AutomatonSet::of({0, 1, 2})});
    for (auto x : all_states(4))
        CHECK(period_function(fig3, s, x)[0] == (x[1] != x[2]));

    auto id = ban_from_definitions({{"a", "a"}, {"b", "b"}});
    for (auto x : all_states(2))
        CHECK(period_function(id, BlockSchedule::sequential(2, {1, 0}), x) == x);
}

TEST_CASE("cycle schedules give one period map")
{
    auto b = gen_cycle(8, true);
    GlobalMap f(b);
    auto s = cycle_schedules(8);
    for (auto x : all_states(8)) {
        auto y = period_function(b, s[0], x);
        REQUIRE(period_function(b, s[1], x) == y);
        REQUIRE(period_function(b, s[2], x) == y);
        REQUIRE(f.period(s[1], x) == y);
    }
}

TEST_CASE("random schedules: labeling round trip")
{
    std::mt19937 rng(3001);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 1 + rng() % 8;
        auto b = testing::random_ban(rng, n);
        auto g = build_igraph(b);
        auto s = testing::random_schedule(rng, n);
        auto nu = blocks_to_nu(s, g);
        auto r = nu_realizable(nu, n);
        REQUIRE(std::holds_alternative<BlockSchedule>(r));
        auto coarse = std::get<BlockSchedule>(r);
        REQUIRE(blocks_to_nu(coarse, g) == nu);
        REQUIRE(coarse.blocks().size() <= s.blocks().size());
    }
}

TEST_CASE("random schedules: equal labelings give equal period maps")
{
    std::mt19937 rng(3002);
    std::size_t matched = 0;
    for (int round = 0; round < 300; ++round) {
        std::size_t n = 1 + rng() % 8;
        auto b = testing::random_ban(rng, n, 2);
        auto g = build_igraph(b);
        auto s1 = testing::random_schedule(rng, n);
        auto s2 = rng() % 2 ? testing::random_schedule(rng, n) : std::get<BlockSchedule>(nu_realizable(blocks_to_nu(s1, g), n));
        if (blocks_to_nu(s1, g) != blocks_to_nu(s2, g))
            continue;
        ++matched;
        for (auto x : all_states(n))
            REQUIRE(period_function(b, s1, x) == period_function(b, s2, x));
    }
    CHECK(matched >= 150);
}

TEST_CASE("random schedules: formula route and table route agree")
{
    std::mt19937 rng(3003);
    for (int round = 0; round < 100; ++round) {
        std::size_t n = 1 + rng() % 9;
        auto b = testing::random_ban(rng, n);
        GlobalMap f(b);
        auto s = testing::random_schedule(rng, n);
        for (auto x : all_states(n)) {
            REQUIRE(f.period(s, x) == period_function(b, s, x));
            REQUIRE(period_function(b, BlockSchedule::parallel(n), x) == parallel_step(b, x));
        }
    }
}

TEST_CASE("random schedules: only the parallel labeling has full degree")
{
    std::mt19937 rng(3004);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 1 + rng() % 8;
        auto g = build_igraph(testing::random_ban(rng, n));
        auto nu = blocks_to_nu(testing::random_schedule(rng, n), g);
        auto full = degree_of_synchronism(nu) == g.arcs().size();
        REQUIRE(full == (nu == blocks_to_nu(BlockSchedule::parallel(n), g)));
        REQUIRE(degree_of_synchronism(nu) <= degree_of_synchronism(blocks_to_nu(BlockSchedule::parallel(n), g)));
    }
}
