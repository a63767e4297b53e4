#include "ucx/cx_model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "ucx/errors.hpp"

namespace ucx {

using nlohmann::json;

std::string_view to_string(Direction d) { return d == Direction::split ? "split" : "join"; }

Direction parse_direction(std::string_view text) {
    if (text == "split") return Direction::split;
    if (text == "join") return Direction::join;
    throw DataError("unknown direction '" + std::string(text) + "' (split|join)");
}

std::string_view to_string(GatewayKind k) {
    switch (k) {
        case GatewayKind::and_: return "AND";
        case GatewayKind::xor_: return "XOR";
        case GatewayKind::or_exhaustive: return "OR_E";
        case GatewayKind::or_: return "OR";
    }
    return "?";
}

GatewayKind parse_gateway_kind(std::string_view text) {
    if (text == "AND") return GatewayKind::and_;
    if (text == "XOR") return GatewayKind::xor_;
    if (text == "OR_E") return GatewayKind::or_exhaustive;
    if (text == "OR") return GatewayKind::or_;
    throw ParseError("unknown gateway kind '" + std::string(text) + "'");
}

std::string gateway_id(GatewayKind kind, Direction direction, std::size_t row, std::size_t ordinal) {
    std::string prefix;
    switch (kind) {
        case GatewayKind::and_: prefix = "AND"; break;
        case GatewayKind::xor_: prefix = "XOR"; break;
        case GatewayKind::or_exhaustive: prefix = "ORE"; break;
        case GatewayKind::or_: prefix = "OR"; break;
    }
    std::string id = prefix + (direction == Direction::split ? "_C" : "_J") + std::to_string(row);
    if (ordinal) id += "." + std::to_string(ordinal);
    return id;
}

// ---------------------------------------------------------------------------
// CXGraph

void CXGraph::add_node(const std::string& name) {
    if (name.empty()) throw InvariantError("empty node name");
    nodes_.insert(name);
}

void CXGraph::add_edge(const std::string& cause, const std::string& effect, std::optional<double> coefficient) {
    if (!has_node(cause)) throw InvariantError("unknown node '" + cause + "'");
    if (!has_node(effect)) throw InvariantError("unknown node '" + effect + "'");
    if (cause == effect) throw InvariantError("self-loop on '" + cause + "'");
    edges_[{cause, effect}] = coefficient;
}

void CXGraph::remove_edge(const std::string& cause, const std::string& effect) { edges_.erase({cause, effect}); }

std::set<std::string> CXGraph::children(const std::string& n) const {
    std::set<std::string> out;
    for (auto it = edges_.lower_bound({n, std::string()}); it != edges_.end() && it->first.first == n; ++it)
        out.insert(it->first.second);
    return out;
}

std::set<std::string> CXGraph::parents(const std::string& n) const {
    std::set<std::string> out;
    for (const auto& [e, c] : edges_) {
        if (e.second == n) out.insert(e.first);
    }
    return out;
}

std::optional<std::vector<std::string>> CXGraph::topological_order() const {
    std::map<std::string, std::size_t> indegree;
    for (const auto& n : nodes_) indegree[n] = 0;
    for (const auto& [e, c] : edges_) ++indegree[e.second];
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [n, d] : indegree) {
        if (d == 0) ready.push(n);
    }
    std::vector<std::string> order;
    while (!ready.empty()) {
        auto n = ready.top();
        ready.pop();
        order.push_back(n);
        for (const auto& c : children(n)) {
            if (--indegree[c] == 0) ready.push(c);
        }
    }
    if (order.size() != nodes_.size()) return std::nullopt;
    return order;
}

void CXGraph::validate() const {
    for (const auto& [e, c] : edges_) {
        if (!has_node(e.first) || !has_node(e.second)) throw InvariantError("unknown node in edge");
        if (e.first == e.second) throw InvariantError("self-loop on '" + e.first + "'");
    }
    if (!is_acyclic()) throw InvariantError("graph has a cycle");
}

CXGraph CXGraph::reversed() const {
    CXGraph g(nodes_);
    for (const auto& [e, c] : edges_) g.edges_[{e.second, e.first}] = c;
    return g;
}

CXGraph CXGraph::structure() const {
    CXGraph g(nodes_);
    for (const auto& [e, c] : edges_) g.edges_[e] = std::nullopt;
    return g;
}

// ---------------------------------------------------------------------------
// UCXGraph

void UCXGraph::add_activity(const std::string& name) {
    if (name.empty()) throw InvariantError("empty activity name");
    if (is_gateway(name)) throw InvariantError("activity '" + name + "' collides with a gateway id");
    activities_.insert(name);
}

void UCXGraph::add_gateway(GatewayNode gateway) {
    if (is_activity(gateway.id)) throw InvariantError("gateway id '" + gateway.id + "' collides with an activity");
    auto id = gateway.id;
    gateways_.insert_or_assign(id, std::move(gateway));
}

void UCXGraph::add_edge(const std::string& from, const std::string& to) {
    if (!has_node(from)) throw InvariantError("unknown node '" + from + "'");
    if (!has_node(to)) throw InvariantError("unknown node '" + to + "'");
    if (from == to) throw InvariantError("self-loop on '" + from + "'");
    edges_.emplace(from, to);
}

void UCXGraph::remove_edge(const std::string& from, const std::string& to) { edges_.erase({from, to}); }

void UCXGraph::set_alternatives(const std::string& gateway_id, Alternatives alternatives) {
    if (!is_gateway(gateway_id)) throw InvariantError("unknown gateway '" + gateway_id + "'");
    for (auto& alt : alternatives) {
        for (auto& el : alt) std::sort(el.begin(), el.end());
        std::sort(alt.begin(), alt.end());
    }
    std::sort(alternatives.begin(), alternatives.end());
    alternatives_[gateway_id] = std::move(alternatives);
}

std::vector<std::string> UCXGraph::successors(const std::string& id) const {
    std::vector<std::string> out;
    for (auto it = edges_.lower_bound({id, std::string()}); it != edges_.end() && it->first == id; ++it)
        out.push_back(it->second);
    return out;
}

std::vector<std::string> UCXGraph::predecessors(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& e : edges_) {
        if (e.second == id) out.push_back(e.first);
    }
    return out;
}

bool UCXGraph::is_acyclic() const {
    std::map<std::string, std::size_t> indegree;
    for (const auto& a : activities_) indegree[a] = 0;
    for (const auto& [id, g] : gateways_) indegree[id] = 0;
    for (const auto& e : edges_) ++indegree[e.second];
    std::vector<std::string> ready;
    for (const auto& [n, d] : indegree) {
        if (d == 0) ready.push_back(n);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        auto n = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& s : successors(n)) {
            if (--indegree[s] == 0) ready.push_back(s);
        }
    }
    return seen == indegree.size();
}

std::vector<std::string> UCXGraph::problems() const {
    std::vector<std::string> out;
    for (const auto& [id, gw] : gateways_) {
        // Orient so that "in" is the single-source side of the gateway.
        auto in = gw.direction == Direction::split ? predecessors(id) : successors(id);
        auto outs = gw.direction == Direction::split ? successors(id) : predecessors(id);
        if (gw.direction != direction_)
            out.push_back("gateway " + id + " has direction " + std::string(to_string(gw.direction)) +
                          " in a " + std::string(to_string(direction_)) + " graph");
        if (in.size() != 1)
            out.push_back("gateway " + id + " has " + std::to_string(in.size()) + " source edges, expected 1");
        if (outs.size() < 2)
            out.push_back("gateway " + id + " has " + std::to_string(outs.size()) + " target edges, expected >= 2");
        if (gw.kind == GatewayKind::or_) {
            auto it = alternatives_.find(id);
            if (it == alternatives_.end()) {
                out.push_back("OR gateway " + id + " has no recorded alternatives");
                continue;
            }
            std::set<std::string> covered;
            for (const auto& alt : it->second) {
                for (const auto& el : alt) covered.insert(el.begin(), el.end());
            }
            std::set<std::string> reached;
            for (const auto& t : outs) {
                if (is_activity(t)) {
                    reached.insert(t);
                } else {
                    for (const auto& m : direction_ == Direction::split ? successors(t) : predecessors(t))
                        reached.insert(m);
                }
            }
            if (covered != reached)
                out.push_back("OR gateway " + id + " alternatives do not cover exactly its targets");
        }
    }
    for (const auto& [id, alt] : alternatives_) {
        auto it = gateways_.find(id);
        if (it == gateways_.end() || it->second.kind != GatewayKind::or_)
            out.push_back("alternatives recorded for non-OR node " + id);
    }
    if (!is_acyclic()) out.push_back("graph has a cycle");
    return out;
}

void UCXGraph::validate() const {
    auto p = problems();
    if (!p.empty()) throw InvariantError(p.front());
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string gateway_symbol(GatewayKind k) {
    switch (k) {
        case GatewayKind::and_: return "&";
        case GatewayKind::xor_: return "×";
        case GatewayKind::or_exhaustive: return "O*";
        case GatewayKind::or_: return "O";
    }
    return "?";
}

}  // namespace

std::string format_alternatives(const Alternatives& alternatives) {
    std::vector<std::string> alts;
    for (const auto& alt : alternatives) {
        std::vector<std::string> elements;
        for (const auto& el : alt) elements.push_back(el.size() == 1 ? el.front() : "(" + join(el, ",") + ")");
        alts.push_back("{" + join(elements, ",") + "}");
    }
    return join(alts, " | ");
}

std::string to_dot(const CXGraph& graph) {
    std::ostringstream out;
    out << "digraph cx {\n";
    for (const auto& n : graph.nodes()) out << "  " << dot_quote(n) << " [shape=box];\n";
    for (const auto& [e, c] : graph.edges()) {
        out << "  " << dot_quote(e.first) << " -> " << dot_quote(e.second);
        if (c) {
            std::ostringstream label;
            label.precision(3);
            label << *c;
            out << " [label=" << dot_quote(label.str()) << "]";
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const UCXGraph& graph) {
    std::ostringstream out;
    out << "digraph ucx {\n";
    std::map<std::string, std::string> lines;
    for (const auto& a : graph.activities()) lines[a] = dot_quote(a) + " [shape=box];";
    for (const auto& [id, gw] : graph.gateways()) {
        std::string label = gateway_symbol(gw.kind);
        if (gw.kind == GatewayKind::or_) {
            auto it = graph.or_alternatives().find(id);
            if (it != graph.or_alternatives().end()) label += "\n" + format_alternatives(it->second);
        }
        lines[id] = dot_quote(id) + " [shape=diamond, label=" + dot_quote(label) + "];";
    }
    for (const auto& [id, line] : lines) out << "  " << line << "\n";
    for (const auto& e : graph.edges()) out << "  " << dot_quote(e.first) << " -> " << dot_quote(e.second) << ";\n";
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json element_to_json(const Element& el) { return el.size() == 1 ? json(el.front()) : json(el); }

Element element_from_json(const json& j) {
    if (j.is_string()) return {j.get<std::string>()};
    if (!j.is_array() || j.size() < 2) throw ParseError("composite element must be an array of >= 2 names");
    Element el;
    for (const auto& m : j) {
        if (!m.is_string()) throw ParseError("composite element members must be strings");
        el.push_back(m.get<std::string>());
    }
    std::sort(el.begin(), el.end());
    return el;
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

json parse_document(std::string_view text, const char* expected_type) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("graph document must be a JSON object");
    const auto& type = require(j, "type");
    if (!type.is_string() || type.get<std::string>() != expected_type)
        throw ParseError(std::string("expected a '") + expected_type + "' document");
    return j;
}

template <typename Fn>
auto rethrow_as_parse(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const InvariantError& e) {
        throw ParseError(e.what());
    } catch (const DataError& e) {
        throw ParseError(e.what());
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad graph document: ") + e.what());
    }
}

}  // namespace

std::string to_json(const CXGraph& graph) {
    json j;
    j["type"] = "cx";
    j["nodes"] = json::array();
    for (const auto& n : graph.nodes()) j["nodes"].push_back(n);
    j["edges"] = json::array();
    for (const auto& [e, c] : graph.edges()) {
        json je{{"source", e.first}, {"target", e.second}};
        if (c) je["coefficient"] = *c;
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

std::string to_json(const UCXGraph& graph) {
    json j;
    j["type"] = "ucx";
    j["direction"] = to_string(graph.direction());
    j["activities"] = json::array();
    for (const auto& a : graph.activities()) j["activities"].push_back(a);
    j["gateways"] = json::array();
    for (const auto& [id, gw] : graph.gateways()) {
        j["gateways"].push_back(
            {{"id", id}, {"kind", to_string(gw.kind)}, {"direction", to_string(gw.direction)}, {"row", gw.row}});
    }
    j["edges"] = json::array();
    for (const auto& e : graph.edges()) j["edges"].push_back({{"source", e.first}, {"target", e.second}});
    j["or_alternatives"] = json::object();
    for (const auto& [id, alts] : graph.or_alternatives()) {
        json ja = json::array();
        for (const auto& alt : alts) {
            json jalt = json::array();
            for (const auto& el : alt) jalt.push_back(element_to_json(el));
            ja.push_back(std::move(jalt));
        }
        j["or_alternatives"][id] = std::move(ja);
    }
    return j.dump(2) + "\n";
}

CXGraph cx_from_json(std::string_view text) {
    auto j = parse_document(text, "cx");
    return rethrow_as_parse([&] {
        CXGraph g;
        for (const auto& n : require(j, "nodes")) g.add_node(n.get<std::string>());
        for (const auto& e : require(j, "edges")) {
            std::optional<double> coef;
            if (e.contains("coefficient") && !e.at("coefficient").is_null()) {
                coef = e.at("coefficient").get<double>();
                if (!std::isfinite(*coef)) throw ParseError("non-finite coefficient");
            }
            g.add_edge(require(e, "source").get<std::string>(), require(e, "target").get<std::string>(), coef);
        }
        g.validate();
        return g;
    });
}

UCXGraph ucx_from_json(std::string_view text, bool validate) {
    auto j = parse_document(text, "ucx");
    return rethrow_as_parse([&] {
        UCXGraph g(parse_direction(require(j, "direction").get<std::string>()));
        for (const auto& a : require(j, "activities")) g.add_activity(a.get<std::string>());
        for (const auto& jg : require(j, "gateways")) {
            GatewayNode gw;
            gw.id = require(jg, "id").get<std::string>();
            gw.kind = parse_gateway_kind(require(jg, "kind").get<std::string>());
            gw.direction = parse_direction(require(jg, "direction").get<std::string>());
            gw.row = require(jg, "row").get<std::size_t>();
            if (g.has_node(gw.id)) throw ParseError("duplicate node id '" + gw.id + "'");
            g.add_gateway(std::move(gw));
        }
        for (const auto& e : require(j, "edges"))
            g.add_edge(require(e, "source").get<std::string>(), require(e, "target").get<std::string>());
        if (j.contains("or_alternatives")) {
            for (const auto& [id, ja] : j.at("or_alternatives").items()) {
                Alternatives alts;
                for (const auto& jalt : ja) {
                    ElementSet alt;
                    for (const auto& jel : jalt) alt.push_back(element_from_json(jel));
                    if (alt.empty()) throw ParseError("empty alternative for " + id);
                    alts.push_back(std::move(alt));
                }
                g.set_alternatives(id, std::move(alts));
            }
        }
        if (validate) g.validate();
        return g;
    });
}

}  // namespace ucx
