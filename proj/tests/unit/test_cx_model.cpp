#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "ucx/cx_model.hpp"
#include "ucx/errors.hpp"
#include "ucx/unification.hpp"
#include "ucx/verify.hpp"

using namespace ucx;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("CXGraph invariants") {
    CXGraph g({"a", "b"});
    CHECK_THROWS_AS(g.add_edge("a", "a"), InvariantError);
    CHECK_THROWS_AS(g.add_edge("a", "z"), InvariantError);
    g.add_edge("a", "b", 0.5);
    CHECK(g.children("a") == std::set<std::string>{"b"});
    CHECK(g.parents("b") == std::set<std::string>{"a"});
    CHECK(g.topological_order() == std::vector<std::string>{"a", "b"});
    g.add_edge("b", "a");
    CHECK_FALSE(g.is_acyclic());
    CHECK_THROWS_AS(g.validate(), InvariantError);
    CHECK(CXGraph({"x"}).reversed() == CXGraph({"x"}));
}

TEST_CASE("gateway arity and OR coverage") {
    UCXGraph g(Direction::split);
    for (auto a : {"a", "b", "c"}) g.add_activity(a);
    g.add_gateway({"AND_C1", GatewayKind::and_, Direction::split, 1});
    g.add_edge("a", "AND_C1");
    g.add_edge("AND_C1", "b");
    CHECK_FALSE(g.problems().empty());  // one target only
    g.add_edge("AND_C1", "c");
    CHECK(g.problems().empty());
    CHECK_THROWS_AS(g.add_activity("AND_C1"), InvariantError);

    UCXGraph o(Direction::split);
    for (auto a : {"f", "a", "b"}) o.add_activity(a);
    o.add_gateway({"OR_C1", GatewayKind::or_, Direction::split, 1});
    o.add_edge("f", "OR_C1");
    o.add_edge("OR_C1", "a");
    o.add_edge("OR_C1", "b");
    CHECK_FALSE(o.problems().empty());  // no alternatives
    o.set_alternatives("OR_C1", {{{"a"}}, {{"a"}, {"b"}}});
    CHECK(o.problems().empty());
    o.set_alternatives("OR_C1", {{{"a"}}});
    CHECK_FALSE(o.problems().empty());  // union misses b

    UCXGraph j(Direction::join);
    for (auto a : {"a", "b", "c"}) j.add_activity(a);
    j.add_gateway({"AND_J3", GatewayKind::and_, Direction::join, 3});
    j.add_edge("a", "AND_J3");
    j.add_edge("b", "AND_J3");
    j.add_edge("AND_J3", "c");
    CHECK(j.problems().empty());
}

TEST_CASE("gateway ids") {
    CHECK(gateway_id(GatewayKind::and_, Direction::split, 1) == "AND_C1");
    CHECK(gateway_id(GatewayKind::xor_, Direction::join, 4) == "XOR_J4");
    CHECK(gateway_id(GatewayKind::and_, Direction::split, 2, 3) == "AND_C2.3");
    CHECK(parse_gateway_kind(to_string(GatewayKind::or_exhaustive)) == GatewayKind::or_exhaustive);
    CHECK_THROWS_AS(parse_direction("sideways"), DataError);
}

TEST_CASE("DOT rendering") {
    auto g2 = fixtures::running_example()[1];
    auto dot = to_dot(g2);
    CHECK(count(dot, "->") == 1);
    CHECK(count(dot, "[shape=box]") == 2);

    auto empty = to_dot(CXGraph{});
    CHECK(count(empty, "->") == 0);
    CHECK(count(empty, "shape=") == 0);

    auto u = to_dot(unify_graphs(fixtures::running_example()));
    CHECK(count(u, "shape=diamond") == 3);
    CHECK(count(u, "->") == 8);
    CHECK(u == to_dot(unify_graphs(fixtures::running_example())));

    auto o = to_dot(unify_graphs(fixtures::or_example()));
    CHECK(count(o, "label=\"O") == 1);
    CHECK(o.find("{a,b} | {a,c}") != std::string::npos);
}

TEST_CASE("JSON round trips") {
    for (const auto& g : fixtures::running_example()) CHECK(cx_from_json(to_json(g)) == g);
    CHECK(cx_from_json(to_json(CXGraph{})) == CXGraph{});
    CHECK(ucx_from_json(to_json(UCXGraph{})) == UCXGraph{});

    CXGraph weighted({"a", "b"});
    weighted.add_edge("a", "b", -0.125);
    CHECK(cx_from_json(to_json(weighted)) == weighted);

    CHECK_THROWS_WITH_AS(
        cx_from_json(R"({"type":"cx","nodes":["a"],"edges":[{"source":"a","target":"z"}]})"),
        doctest::Contains("unknown node"), ParseError);
    CHECK_THROWS_AS(cx_from_json("{"), ParseError);
    CHECK_THROWS_AS(cx_from_json(R"({"type":"ucx"})"), ParseError);
    CHECK_THROWS_AS(
        cx_from_json(R"({"type":"cx","nodes":["a","b"],"edges":[{"source":"a","target":"b"},{"source":"b","target":"a"}]})"),
        ParseError);
}

TEST_CASE("JSON round trip of random unified graphs") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto inputs = random_graph_set(seed);
        for (auto dir : {Direction::split, Direction::join}) {
            auto u = unify_graphs(inputs, dir);
            auto text = to_json(u);
            auto back = ucx_from_json(text);
            CHECK(back == u);
            CHECK(to_json(back) == text);
            CHECK(back.problems().empty());
        }
        // Random DAGs with coefficients.
        std::vector<std::string> names{"p", "q", "r", "s", "t"};
        auto g = random_dag(names, 0.5, rng);
        CXGraph weighted(g.nodes());
        std::uniform_real_distribution<double> coef(-2, 2);
        for (const auto& [e, c] : g.edges()) weighted.add_edge(e.first, e.second, coef(rng));
        CHECK(cx_from_json(to_json(weighted)) == weighted);
    }
}
