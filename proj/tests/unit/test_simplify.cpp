#include <doctest.h>

#include <random>
#include <vector>

#include "fixtures.hpp"
#include "ucx/errors.hpp"
#include "ucx/simplify.hpp"
#include "ucx/unification.hpp"
#include "ucx/verify.hpp"

using namespace ucx;

namespace {

// Exhaustive truth-table comparison over the union of both literal sets.
bool equivalent(const BooleanExpr& x, const BooleanExpr& y) {
    auto lits = x.literals();
    auto more = y.literals();
    lits.insert(more.begin(), more.end());
    std::vector<std::string> vars(lits.begin(), lits.end());
    REQUIRE(vars.size() <= 12);
    for (std::uint32_t m = 0; m < (1u << vars.size()); ++m) {
        std::set<std::string> on;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (m & (1u << i)) on.insert(vars[i]);
        if (x.evaluate(on) != y.evaluate(on)) return false;
    }
    return true;
}

// Independent semantics: an XOR over clauses is true iff an odd number of
// clauses hold.
bool xor_of_clauses(const Alternatives& alts, const std::set<std::string>& on) {
    bool acc = false;
    for (const auto& alt : alts) {
        bool all = true;
        for (const auto& el : alt)
            for (const auto& x : el) all = all && on.count(x);
        acc ^= all;
    }
    return acc;
}

Alternatives random_alternatives(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 5), size(1, 4), letter(0, 7);
    std::set<ElementSet> alts;
    int n = count(rng);
    while (static_cast<int>(alts.size()) < n) {
        std::set<std::string> lits;
        int k = size(rng);
        for (int i = 0; i < k; ++i) lits.insert(std::string(1, static_cast<char>('a' + letter(rng))));
        ElementSet alt;
        for (const auto& l : lits) alt.push_back({l});
        alts.insert(alt);
    }
    return {alts.begin(), alts.end()};
}

}  // namespace

TEST_CASE("OR formulas") {
    Alternatives ab_ac{{{"a"}, {"b"}}, {{"a"}, {"c"}}};
    auto f = or_formula(ab_ac);
    CHECK(to_string(f) == "(a∧b)⊕(a∧c)");
    CHECK(to_string(f, true) == "(a&b)^(a&c)");
    CHECK(to_string(factor(f)) == "a∧(b⊕c)");
    CHECK(equivalent(f, factor(f)));

    CHECK(to_string(or_formula({{{"a"}}})) == "a");
    auto mixed = or_formula({{{"a"}, {"b"}}, {{"c"}}});
    CHECK(to_string(mixed) == "(a∧b)⊕c");
    for (int m = 0; m < 8; ++m) {
        std::set<std::string> on;
        if (m & 1) on.insert("a");
        if (m & 2) on.insert("b");
        if (m & 4) on.insert("c");
        CHECK(mixed.evaluate(on) == xor_of_clauses({{{"a"}, {"b"}}, {{"c"}}}, on));
    }

    // Composite elements expand into their members.
    CHECK(to_string(or_formula({{{"a", "b"}}, {{"c"}}})) == "(a∧b)⊕c");

    CHECK_THROWS_AS(or_formula({}), DataError);
    CHECK_THROWS_AS(or_formula({{}}), DataError);
}

TEST_CASE("factoring") {
    auto plain = or_formula({{{"a"}}, {{"b"}}});
    CHECK(factor(plain) == plain);

    auto abc_abd = or_formula({{{"a"}, {"b"}, {"c"}}, {{"a"}, {"b"}, {"d"}}});
    CHECK(to_string(factor(abc_abd)) == "a∧b∧(c⊕d)");
    CHECK(equivalent(abc_abd, factor(abc_abd)));

    // A branch that would be emptied keeps the formula as is.
    auto keep = or_formula({{{"a"}}, {{"a"}, {"b"}}});
    CHECK(equivalent(keep, factor(keep)));
    CHECK(factor(keep).literals() == std::set<std::string>{"a", "b"});
}

TEST_CASE("factoring preserves semantics and is idempotent") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        auto alts = random_alternatives(rng);
        auto f = or_formula(alts);
        std::set<std::string> leaves;
        for (const auto& alt : alts)
            for (const auto& el : alt) leaves.insert(el.begin(), el.end());
        CHECK(f.literals() == leaves);
        auto g = factor(f);
        CHECK(equivalent(f, g));
        CHECK(factor(g) == g);
    }
}

TEST_CASE("simplify report and rendering") {
    auto inputs = fixtures::or_example();
    auto u = unify_graphs(inputs);
    auto report = simplify_report(u);
    REQUIRE(report.size() == 1);
    CHECK(report.begin()->second == "a∧(b⊕c)");
    CHECK(simplify_report(u, true, false).begin()->second == "(a&b)^(a&c)");
    CHECK(simplify_report(unify_graphs(fixtures::running_example())).empty());

    auto rendered = render_factored(u);
    CHECK(rendered.or_alternatives().empty());
    CHECK(rendered.problems().empty());
    CHECK(verify(rendered, inputs).ok());
    CHECK(unify_graphs(inputs) == u);  // canonical output untouched
}

TEST_CASE("rendered graphs stay sound and complete") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto inputs = random_graph_set(seed);
        for (auto dir : {Direction::split, Direction::join}) {
            auto rendered = render_factored(unify_graphs(inputs, dir));
            CAPTURE(seed);
            CHECK(verify(rendered, inputs).ok());
        }
    }
}
