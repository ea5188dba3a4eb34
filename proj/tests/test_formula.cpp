#include <catch_amalgamated.hpp>

#include <banet/formula.hpp>
#include <support/oracles.hpp>
#include <support/random_ban.hpp>

#include <random>

using namespace banet;
using testing::all_states;

namespace {

Formula v(std::size_t i) { return Formula::var(i); }

// Evaluation by structural recursion with plain loops, as a second opinion
// on the bit-parallel truth tables.
bool eval_ref(const Formula& f, State x)
{
    switch (f.op()) {
    case Op::constant:
        return f.value();
    case Op::var:
        return x[f.var_index()];
    case Op::negation:
        return !eval_ref(f.children()[0], x);
    case Op::conjunction:
        for (const auto& c : f.children())
            if (!eval_ref(c, x))
                return false;
        return true;
    case Op::disjunction:
        for (const auto& c : f.children())
            if (eval_ref(c, x))
                return true;
        return false;
    case Op::exclusive_or: {
        bool acc = false;
        for (const auto& c : f.children())
            acc = acc != eval_ref(c, x);
        return acc;
    }
    }
    return false;
}

} // namespace

TEST_CASE("parse builds the expected tree")
{
    CHECK(parse("x2 | (x0 & !x1)") ==
          Formula::disjunction({v(2), Formula::conjunction({v(0), Formula::negation(v(1))})}));
    CHECK(parse("0") == Formula::constant(false));
    CHECK(parse("1") == Formula::constant(true));
    CHECK(parse("  x7  ") == v(7));
}

TEST_CASE("parse honours operator precedence")
{
    // NOT > AND > XOR > OR
    CHECK(parse("x0 | x1 ^ x2 & !x3") ==
          Formula::disjunction(
              {v(0), Formula::exclusive_or({v(1), Formula::conjunction({v(2), Formula::negation(v(3))})})}));
    CHECK(parse("!x0 & x1") == Formula::conjunction({Formula::negation(v(0)), v(1)}));
    CHECK(parse("!(x0 & x1)") == Formula::negation(Formula::conjunction({v(0), v(1)})));
    CHECK(parse("!!x0") == Formula::negation(Formula::negation(v(0))));
}

TEST_CASE("chains of one operator become one node")
{
    CHECK(parse("x0 & x1 & x2") == Formula::conjunction({v(0), v(1), v(2)}));
    CHECK(parse("x0 ^ x1 ^ x2 ^ x3").children().size() == 4);
    CHECK(parse("(x0 & x1) & x2") == Formula::conjunction({Formula::conjunction({v(0), v(1)}), v(2)}));
}

TEST_CASE("syntax errors carry a position")
{
    try {
        parse("x1 ^");
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
    }
    try {
        parse("x0 &\n  & x1");
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    for (auto bad : {"", "(x0", "x0)", "x0 x1", "x0 & & x1", "2", "01", "x0 # x1", "y", "x"})
        CHECK_THROWS_AS(parse(bad), parse_error);
}

TEST_CASE("parse offsets positions by the origin")
{
    try {
        parse("x0 |", resolve_indexed, SourcePos{4, 10});
        FAIL("no error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 14);
    }
}

TEST_CASE("eval on the four-automaton example")
{
    auto f0 = parse("x2 | (x0 & !x1)");
    CHECK_FALSE(eval(f0, parse_state("0000")));
    CHECK_FALSE(eval(f0, parse_state("1100")));
    CHECK(eval(f0, parse_state("1000")));
    CHECK(eval(f0, parse_state("0010")));
    auto x = parse("x1 ^ x1");
    for (auto s : all_states(3))
        CHECK_FALSE(eval(x, s));
}

TEST_CASE("semantic dependencies")
{
    CHECK(semantic_deps(parse("x1 ^ x1"), 3).empty());
    CHECK(semantic_deps(parse("x2 | (x0 & !x1)"), 4) == AutomatonSet::of({0, 1, 2}));
    CHECK(semantic_deps(parse("1"), 2).empty());
    CHECK(semantic_deps(parse("x0 | !x0 & x1"), 2) == AutomatonSet::of({0, 1}));
    CHECK(semantic_deps(parse("x0 | x0 & x1"), 2) == AutomatonSet::of({0}));
    CHECK_THROWS_AS(semantic_deps(parse("x3"), 2), validation_error);
    CHECK_THROWS_AS(semantic_deps(parse("1"), 0), validation_error);
}

TEST_CASE("arc signs")
{
    CHECK(arc_sign(parse("x2 | x3"), 2, 4) == ArcSign::positive);
    CHECK(arc_sign(parse("x2 ^ x3"), 2, 4) == ArcSign::non_monotone);
    CHECK(arc_sign(parse("!x2"), 2, 3) == ArcSign::negative);
    CHECK(arc_sign(parse("x0 ^ x0"), 0, 1) == std::nullopt);
    CHECK(arc_sign(parse("x1"), 0, 2) == std::nullopt);
    CHECK(to_symbol(ArcSign::non_monotone) == "+-");
}

TEST_CASE("truth tables spanning several words")
{
    auto f = parse("x9 ^ (x0 & x7)");
    TruthTable t(f, 10);
    for (auto x : all_states(10))
        REQUIRE(t[x] == eval_ref(f, x));
    CHECK(semantic_deps(t) == AutomatonSet::of({0, 7, 9}));
    CHECK(TruthTable(parse("x3 | !x3"), 8).constant_value() == true);
    CHECK(TruthTable(parse("x3"), 8).constant_value() == std::nullopt);
}

TEST_CASE("constant folding and substitution")
{
    CHECK(fold_constants(parse("x0 & 1")) == v(0));
    CHECK(fold_constants(parse("x0 & 0")) == Formula::constant(false));
    CHECK(fold_constants(parse("x0 | 1")) == Formula::constant(true));
    CHECK(fold_constants(parse("!1")) == Formula::constant(false));
    CHECK(fold_constants(parse("x0 ^ 1")) == Formula::negation(v(0)));
    // x ^ x is left alone: folding is not simplification
    CHECK(fold_constants(parse("x0 ^ x0")) == parse("x0 ^ x0"));
    auto g = substitute(parse("x0 & x1"), [](std::size_t i) -> std::optional<Formula> {
        if (i == 1)
            return parse("x2 | x3");
        return std::nullopt;
    });
    CHECK(g == Formula::conjunction({v(0), parse("x2 | x3")}));
}

TEST_CASE("printing")
{
    CHECK(print(parse("x2 | (x0 & !x1)")) == "x2 | (x0 & !x1)");
    CHECK(print(parse("!(x0 ^ x1)")) == "!(x0 ^ x1)");
    CHECK(print(parse("(x0 | x1) | x2")) == "(x0 | x1) | x2");
    CHECK(print(Formula::constant(true)) == "1");
}

TEST_CASE("random formulas: truth tables agree with recursive evaluation")
{
    std::mt19937 rng(1001);
    for (int round = 0; round < 300; ++round) {
        std::size_t n = 1 + rng() % 10;
        auto f = testing::random_formula(rng, n, 4);
        TruthTable t(f, n);
        for (auto x : all_states(n)) {
            REQUIRE(t[x] == eval_ref(f, x));
            REQUIRE(eval(f, x) == eval_ref(f, x));
        }
    }
}

TEST_CASE("random formulas: print and parse round trip")
{
    std::mt19937 rng(1002);
    for (int round = 0; round < 500; ++round) {
        std::size_t n = 1 + rng() % 12;
        auto f = testing::random_formula(rng, n, 5);
        auto text = print(f);
        INFO(text);
        REQUIRE(parse(text) == f);
        REQUIRE(print(parse(text)) == text);
    }
}

TEST_CASE("random formulas: dependencies and signs match flip witnesses")
{
    std::mt19937 rng(1003);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 1 + rng() % 10;
        auto f = testing::random_formula(rng, n, 4);
        INFO(print(f));
        auto deps = semantic_deps(f, n);
        REQUIRE(deps.subset_of(variables(f)));
        for (std::size_t i = 0; i < n; ++i) {
            auto w = testing::flip_witnesses(f, i, n);
            REQUIRE(deps.contains(i) == testing::depends_by_flips(f, i, n));
            auto s = arc_sign(f, i, n);
            if (!w.rising && !w.falling)
                REQUIRE(!s);
            else if (w.rising && w.falling)
                REQUIRE(s == ArcSign::non_monotone);
            else
                REQUIRE(s == (w.rising ? ArcSign::positive : ArcSign::negative));
        }
    }
}

TEST_CASE("random formulas: constant folding preserves the function")
{
    std::mt19937 rng(1004);
    for (int round = 0; round < 300; ++round) {
        std::size_t n = 1 + rng() % 8;
        auto f = testing::random_formula(rng, n, 4);
        auto g = fold_constants(f);
        for (auto x : all_states(n))
            REQUIRE(eval_ref(f, x) == eval_ref(g, x));
    }
}
