#include <catch_amalgamated.hpp>

#include <banet/network_file.hpp>
#include <support/random_ban.hpp>

#include <random>

using namespace banet;

TEST_CASE("comments, blank lines and forward references")
{
    auto b = parse_network("# two automata\n\na = b & !a   # trailing\n  b = a\n");
    REQUIRE(b.size() == 2);
    CHECK(b.names() == std::vector<std::string>{"a", "b"});
    CHECK(b.function(0) == parse("x1 & !x0"));
    CHECK(b.function(1) == parse("x0"));
}

TEST_CASE("windows line endings")
{
    auto b = parse_network("a = b\r\nb = !a\r\n");
    CHECK(b.function(1) == parse("!x0"));
}

TEST_CASE("duplicate-variable expressions load without arcs")
{
    auto b = parse_network("a = b ^ b\nb = b\n");
    CHECK_FALSE(build_igraph(b).sign(1, 0));
}

TEST_CASE("undefined names are reported with their position")
{
    try {
        parse_network("a = b\nb = a | z\n");
        FAIL("no error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()) == "2:9: undefined automaton 'z'");
    }
}

TEST_CASE("duplicate names are rejected")
{
    try {
        parse_network("a = a\n a = !a\n");
        FAIL("no error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).rfind("2:2:", 0) == 0);
    }
}

TEST_CASE("syntax errors carry file coordinates")
{
    try {
        parse_network("a = a\nb = a &\n");
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 8);
    }
    try {
        parse_network("a = a\nb a\n");
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_network("= a\n"), parse_error);
    CHECK_THROWS_AS(parse_network("# nothing\n\n"), validation_error);
    CHECK_THROWS_AS(load_network("/nonexistent/net.ban"), validation_error);
}

TEST_CASE("writing")
{
    CHECK(write_network(gen_cycle(1, true)) == "a1 = !a1\n");
    CHECK(write_network(gen_figure_ban(Figure::fig2)).rfind("x0 = x2 | (x0 & !x1)\n", 0) == 0);
}

TEST_CASE("random networks: write then parse round trip")
{
    std::mt19937 rng(7001);
    for (int round = 0; round < 200; ++round) {
        auto b = testing::random_ban(rng, 1 + rng() % 12, 4);
        auto text = write_network(b);
        auto back = parse_network(text);
        REQUIRE(back.names() == b.names());
        REQUIRE(back.functions() == b.functions());
        REQUIRE(write_network(back) == text);
    }
}
