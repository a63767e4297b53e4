#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "ucx/errors.hpp"
#include "ucx/unification.hpp"
#include "ucx/verify.hpp"

using namespace ucx;

namespace {

using Cells = std::vector<NodeSet>;

// Collapses AND fan-outs back into plain edges.
CXGraph collapse_and(const UCXGraph& u) {
    CXGraph g(u.activities());
    for (const auto& [from, to] : u.edges()) {
        if (!u.is_activity(from)) continue;
        if (u.is_activity(to)) {
            g.add_edge(from, to);
        } else {
            REQUIRE(u.gateways().at(to).kind == GatewayKind::and_);
            for (const auto& t : u.successors(to)) g.add_edge(from, t);
        }
    }
    return g;
}

}  // namespace

TEST_CASE("family matrix of the running example") {
    auto m = build_matrix(fixtures::running_example(), Direction::split);
    CHECK(m.row_nodes == std::vector<std::string>{"a", "b", "c", "f", "g", "h"});
    CHECK(m.columns == std::vector<std::string>{"g1", "g2", "g3"});
    CHECK(m.cells[m.row_of("a")] == Cells{{"b", "c"}, {"f"}, {}});
    CHECK(m.cells[m.row_of("f")] == Cells{{}, {}, {"g", "h"}});
    for (auto n : {"b", "c", "g", "h"}) CHECK(m.cells[m.row_of(n)] == Cells{{}, {}, {}});

    auto j = build_matrix(fixtures::running_example(), Direction::join);
    CHECK(j.cells[j.row_of("b")] == Cells{{"a"}, {}, {}});
    CHECK(j.cells[j.row_of("f")] == Cells{{}, {"a"}, {}});
    CHECK(j.cells[j.row_of("g")] == Cells{{}, {}, {"f"}});
    CHECK(j.cells[j.row_of("a")] == Cells{{}, {}, {}});

    auto one = build_matrix({fixtures::running_example()[0]}, Direction::split);
    CHECK(one.columns.size() == 1);
    CHECK(one.cells[one.row_of("a")] == Cells{{"b", "c"}});
    CHECK_THROWS_AS(one.row_of("z"), DataError);
}

TEST_CASE("classification of the running example") {
    auto m = build_matrix(fixtures::running_example(), Direction::split);
    auto alts = classify(m);
    CHECK(alts.empty());
    const auto& a = m.rows[m.row_of("a")];
    CHECK(a.annotation == RowAnnotation::xor_);
    CHECK(a.family == std::vector<ElementSet>{{{"b", "c"}}, {{"f"}}});
    CHECK(a.promotions == std::vector<Element>{{"b", "c"}});
    const auto& f = m.rows[m.row_of("f")];
    CHECK(f.annotation == RowAnnotation::and_);
    CHECK(f.promotions == std::vector<Element>{{"g", "h"}});
    CHECK(m.rows[m.row_of("b")].annotation == RowAnnotation::none);
}

TEST_CASE("family classification examples") {
    CHECK(classify_family({{"a", "b"}, {"a", "c"}}).annotation == RowAnnotation::or_);
    CHECK(classify_family({{"a"}, {"b"}, {"a", "b"}}).annotation == RowAnnotation::or_exhaustive);
    CHECK(classify_family({{"a"}, {"a"}, {}}).annotation == RowAnnotation::none);
    CHECK(classify_family({{"b", "c"}, {"f"}}).annotation == RowAnnotation::xor_);
    CHECK(classify_family({}).annotation == RowAnnotation::none);
    CHECK(classify_family({{"a", "b"}}).annotation == RowAnnotation::and_);

    // Promoted groups count as single atoms for the powerset test.
    auto e = classify_family({{"a", "b"}, {"c"}, {"a", "b", "c"}});
    CHECK(e.annotation == RowAnnotation::or_exhaustive);
    CHECK(e.atoms == std::vector<Element>{{"a", "b"}, {"c"}});
}

TEST_CASE("reconstruction reproduces the unified running example") {
    auto u = unify_graphs(fixtures::running_example());
    CHECK(fixtures::isomorphic(u, fixtures::unified_example()));
    CHECK(u.gateways().count("XOR_C1"));
    CHECK(u.gateways().count("AND_C1"));
    CHECK(u.gateways().count("AND_C4"));  // row of f among the six input nodes
    CHECK(u.or_alternatives().empty());
    CHECK(to_json(u) == to_json(unify_graphs(fixtures::running_example())));
}

TEST_CASE("reconstruction of the OR example") {
    auto u = unify_graphs(fixtures::or_example());
    fixtures::ExpectedUCX want{{"a", "b", "c", "f"},
                               {{"OR_C1", GatewayKind::or_}},
                               {{"f", "OR_C1"}, {"OR_C1", "a"}, {"OR_C1", "b"}, {"OR_C1", "c"}}};
    CHECK(fixtures::isomorphic(u, want));
    REQUIRE(u.or_alternatives().size() == 1);
    CHECK(u.or_alternatives().begin()->second == Alternatives{{{"a"}, {"b"}}, {{"a"}, {"c"}}});
}

TEST_CASE("reconstruct rejects inconsistent annotations") {
    auto m = build_matrix(fixtures::or_example(), Direction::split);
    NodeSet nodes(m.row_nodes.begin(), m.row_nodes.end());
    CHECK_THROWS_AS(reconstruct(m, {}, nodes), InvariantError);  // not classified
    auto alts = classify(m);
    CHECK_THROWS_AS(reconstruct(m, {}, nodes), InvariantError);  // OR without alternatives
    CHECK_NOTHROW(reconstruct(m, alts, nodes));
}

TEST_CASE("a single input unifies to itself up to AND fan-outs") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto g = random_graph_set(seed, 8, 1).front();
        for (auto dir : {Direction::split, Direction::join}) {
            auto u = unify_graphs({g}, dir);
            for (const auto& [id, gw] : u.gateways()) CHECK(gw.kind == GatewayKind::and_);
            auto back = dir == Direction::split ? collapse_and(u) : collapse_and(mirrored(u)).reversed();
            CHECK(back == g.structure());
        }
    }
}

TEST_CASE("unification properties on random graph sets") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        CAPTURE(seed);
        auto inputs = random_graph_set(seed);
        NodeSet all;
        for (const auto& g : inputs) all.insert(g.nodes().begin(), g.nodes().end());
        for (auto dir : {Direction::split, Direction::join}) {
            auto m = build_matrix(inputs, dir);
            auto alts = classify(m);
            // Exactly the OR rows carry alternatives.
            std::size_t or_rows = 0;
            for (const auto& row : m.rows) or_rows += row.annotation == RowAnnotation::or_;
            CHECK(alts.size() == or_rows);

            auto u = reconstruct(m, alts, all);
            CHECK(u.activities() == all);  // node conservation
            CHECK(u.problems().empty());
            for (const auto& [id, gw] : u.gateways()) CHECK(gw.direction == dir);
        }
        // Mirror symmetry.
        std::vector<CXGraph> reversed;
        for (const auto& g : inputs) reversed.push_back(g.reversed());
        CHECK(unify_graphs(inputs, Direction::join) == mirrored(unify_graphs(reversed, Direction::split)));
    }
}

TEST_CASE("inputs that disagree on a direction are rejected") {
    std::vector<CXGraph> inputs{fixtures::graph({"a", "b"}, {{"a", "b"}}), fixtures::graph({"a", "b"}, {{"b", "a"}})};
    CHECK_THROWS_WITH_AS(unify_graphs(inputs), doctest::Contains("disagree"), DataError);
    std::vector<CXGraph> triangle{fixtures::graph({"a", "b"}, {{"a", "b"}}), fixtures::graph({"b", "c"}, {{"b", "c"}}),
                                  fixtures::graph({"a", "c"}, {{"c", "a"}})};
    CHECK_THROWS_AS(unify_graphs(triangle), DataError);
}

TEST_CASE("unify from a log") {
    auto log = fixtures::example_log();
    UnifyConfig config;
    config.discovery.min_traces = 2;
    auto r = unify(log, std::nullopt, config);
    CHECK(r.partitions.size() == 3);
    CHECK(r.outcomes[2].skipped);  // {F,G,H} has one trace; its nodes still take part
    CHECK(r.graph.activities() == log.alphabet());

    config.discovery.min_traces = 50;
    CHECK_THROWS_AS(unify(log, std::nullopt, config), DataError);

    config.discovery.min_traces = 2;
    config.jobs = 3;
    CHECK(unify(log, std::nullopt, config).graph == r.graph);
}
