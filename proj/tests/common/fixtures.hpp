#pragma once

// Fixtures and independent oracles shared by the unit and acceptance tests.
// Nothing here calls into the code under test beyond plain accessors.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ucx/cx_model.hpp"
#include "ucx/event_log.hpp"

namespace fixtures {

using ucx::CXGraph;
using ucx::UCXGraph;

inline CXGraph graph(std::set<std::string> nodes, std::initializer_list<std::pair<const char*, const char*>> edges) {
    CXGraph g(std::move(nodes));
    for (const auto& [a, b] : edges) g.add_edge(a, b);
    return g;
}

/// g1, g2, g3 of the running example.
inline std::vector<CXGraph> running_example() {
    return {graph({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}}), graph({"a", "f"}, {{"a", "f"}}),
            graph({"f", "g", "h"}, {{"f", "g"}, {"f", "h"}})};
}

/// The two graphs whose unification needs a non-exhaustive OR.
inline std::vector<CXGraph> or_example() {
    return {graph({"f", "a", "b"}, {{"f", "a"}, {"f", "b"}}), graph({"f", "a", "c"}, {{"f", "a"}, {"f", "c"}})};
}

/// Example log L: superscripts are timestamps, one case per line.
inline const char* example_log_csv() {
    return "case:concept:name,concept:name,time:timestamp\n"
           "1,A,1\n1,B,3\n1,C,6\n"
           "2,A,2\n2,F,5\n"
           "3,F,4\n3,G,8\n3,H,12\n"
           "4,A,10\n4,F,15\n"
           "5,A,13\n5,C,14\n5,B,17\n";
}

inline ucx::EventLog example_log() {
    std::istringstream in(example_log_csv());
    return ucx::parse_csv(in);
}

struct ExpectedUCX {
    std::set<std::string> activities;
    std::map<std::string, ucx::GatewayKind> gateways;
    std::set<ucx::Edge> edges;
};

/// Isomorphism with activity names fixed and gateway kinds fixed: tries every
/// kind-preserving bijection between gateway ids (instances are tiny).
inline bool isomorphic(const UCXGraph& got, const ExpectedUCX& want) {
    if (got.activities() != want.activities) return false;
    if (got.gateways().size() != want.gateways.size() || got.edges().size() != want.edges.size()) return false;
    std::vector<std::string> mine, theirs;
    for (const auto& [id, gw] : got.gateways()) mine.push_back(id);
    for (const auto& [id, k] : want.gateways) theirs.push_back(id);
    std::sort(theirs.begin(), theirs.end());
    do {
        bool kinds_ok = true;
        std::map<std::string, std::string> rename;
        for (std::size_t i = 0; i < mine.size(); ++i) {
            if (got.gateways().at(mine[i]).kind != want.gateways.at(theirs[i])) kinds_ok = false;
            rename[mine[i]] = theirs[i];
        }
        if (!kinds_ok) continue;
        std::set<ucx::Edge> mapped;
        auto name = [&](const std::string& n) { return rename.count(n) ? rename.at(n) : n; };
        for (const auto& [a, b] : got.edges()) mapped.insert({name(a), name(b)});
        if (mapped == want.edges) return true;
    } while (std::next_permutation(theirs.begin(), theirs.end()));
    return false;
}

/// The unified graph of the running example, with the row numbers of its
/// own six-node matrix (a = row 1, f = row 4).
inline ExpectedUCX unified_example() {
    using K = ucx::GatewayKind;
    return {{"a", "b", "c", "f", "g", "h"},
            {{"XOR_C1", K::xor_}, {"AND_C1", K::and_}, {"AND_C6", K::and_}},
            {{"a", "XOR_C1"},
             {"XOR_C1", "AND_C1"},
             {"AND_C1", "b"},
             {"AND_C1", "c"},
             {"XOR_C1", "f"},
             {"f", "AND_C6"},
             {"AND_C6", "g"},
             {"AND_C6", "h"}}};
}

/// p_{before -> after} by direct counting over traces (first occurrences).
inline double precedence_oracle(const std::vector<ucx::Trace>& traces, const std::string& before,
                                const std::string& after) {
    if (traces.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& t : traces) {
        const ucx::ActivityEvent *x = nullptr, *y = nullptr;
        for (const auto& e : t.events) {
            if (e.name == before && !x) x = &e;
            if (e.name == after && !y) y = &e;
        }
        if (x && y && x->timestamp < y->timestamp) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(traces.size());
}

}  // namespace fixtures
