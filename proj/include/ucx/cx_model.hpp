#pragma once

// Graph model for causal execution (CX) graphs and unified (U-CX) graphs with
// causal gateways, plus JSON and DOT serialization.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucx {

enum class Direction { split, join };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

/// AND: all targets. XOR: exactly one. OR_E: any non-empty combination.
/// OR: one of the recorded alternatives.
enum class GatewayKind { and_, xor_, or_exhaustive, or_ };

std::string_view to_string(GatewayKind k);
GatewayKind parse_gateway_kind(std::string_view text);

using Edge = std::pair<std::string, std::string>;

/// Causal execution graph: a DAG over activity names.
class CXGraph {
  public:
    CXGraph() = default;
    explicit CXGraph(std::set<std::string> nodes) : nodes_(std::move(nodes)) {}

    void add_node(const std::string& name);
    /// Throws InvariantError for unknown endpoints or self-loops. Acyclicity is
    /// checked by validate().
    void add_edge(const std::string& cause, const std::string& effect, std::optional<double> coefficient = {});
    void remove_edge(const std::string& cause, const std::string& effect);

    const std::set<std::string>& nodes() const noexcept { return nodes_; }
    const std::map<Edge, std::optional<double>>& edges() const noexcept { return edges_; }
    bool has_node(const std::string& n) const { return nodes_.count(n) != 0; }
    bool has_edge(const std::string& a, const std::string& b) const { return edges_.count({a, b}) != 0; }

    std::set<std::string> children(const std::string& n) const;
    std::set<std::string> parents(const std::string& n) const;

    /// Kahn order with lexicographic tie-breaking; nullopt if cyclic.
    std::optional<std::vector<std::string>> topological_order() const;
    bool is_acyclic() const { return topological_order().has_value(); }
    void validate() const;

    CXGraph reversed() const;
    /// Same nodes and edges without coefficients.
    CXGraph structure() const;

    bool operator==(const CXGraph&) const = default;

  private:
    std::set<std::string> nodes_;
    std::map<Edge, std::optional<double>> edges_;
};

struct GatewayNode {
    std::string id;
    GatewayKind kind = GatewayKind::and_;
    Direction direction = Direction::split;
    std::size_t row = 0;  // 1-based family-matrix row that produced it

    bool operator==(const GatewayNode&) const = default;
};

/// One member of a child set: a single activity, or (size >= 2) an AND-composite
/// group. Members are sorted.
using Element = std::vector<std::string>;
/// A child set expressed over elements, sorted.
using ElementSet = std::vector<Element>;
/// Family of child sets recorded for a non-exhaustive OR gateway, sorted.
using Alternatives = std::vector<ElementSet>;

/// Unified causal execution graph: activity nodes plus gateway nodes.
class UCXGraph {
  public:
    UCXGraph() = default;
    explicit UCXGraph(Direction direction) : direction_(direction) {}

    Direction direction() const noexcept { return direction_; }

    void add_activity(const std::string& name);
    void add_gateway(GatewayNode gateway);
    /// Throws InvariantError when an endpoint is unknown or the edge is a self-loop.
    void add_edge(const std::string& from, const std::string& to);
    void remove_edge(const std::string& from, const std::string& to);
    void set_alternatives(const std::string& gateway_id, Alternatives alternatives);

    const std::set<std::string>& activities() const noexcept { return activities_; }
    const std::map<std::string, GatewayNode>& gateways() const noexcept { return gateways_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }
    const std::map<std::string, Alternatives>& or_alternatives() const noexcept { return alternatives_; }

    bool is_activity(const std::string& id) const { return activities_.count(id) != 0; }
    bool is_gateway(const std::string& id) const { return gateways_.count(id) != 0; }
    bool has_node(const std::string& id) const { return is_activity(id) || is_gateway(id); }
    bool has_edge(const std::string& a, const std::string& b) const { return edges_.count({a, b}) != 0; }

    std::vector<std::string> successors(const std::string& id) const;
    std::vector<std::string> predecessors(const std::string& id) const;
    bool is_acyclic() const;

    /// Returns a description of every invariant violation (empty when valid):
    /// gateway arity, OR alternatives coverage, acyclicity.
    std::vector<std::string> problems() const;
    /// Throws InvariantError with the first problem.
    void validate() const;

    bool operator==(const UCXGraph&) const = default;

  private:
    Direction direction_ = Direction::split;
    std::set<std::string> activities_;
    std::map<std::string, GatewayNode> gateways_;
    std::set<Edge> edges_;
    std::map<std::string, Alternatives> alternatives_;
};

/// Gateway id such as AND_C1 (split) or XOR_J4 (join). `ordinal` > 0 appends
/// ".<ordinal>" for rows that own several AND gateways.
std::string gateway_id(GatewayKind kind, Direction direction, std::size_t row, std::size_t ordinal = 0);

/// "{a,b} | {(c,d),e}" style rendering of OR alternatives.
std::string format_alternatives(const Alternatives& alternatives);

std::string to_dot(const CXGraph& graph);
std::string to_dot(const UCXGraph& graph);

std::string to_json(const CXGraph& graph);
std::string to_json(const UCXGraph& graph);
CXGraph cx_from_json(std::string_view text);
/// With `validate` false only structural errors (unknown nodes, bad shapes)
/// are rejected, so that damaged graphs can still be loaded for verification.
UCXGraph ucx_from_json(std::string_view text, bool validate = true);

}  // namespace ucx
