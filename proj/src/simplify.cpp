#include "ucx/simplify.hpp"

#include <algorithm>
#include <iterator>
#include <optional>

#include "ucx/errors.hpp"

namespace ucx {

BooleanExpr BooleanExpr::literal(std::string name) {
    if (name.empty()) throw DataError("empty literal name");
    BooleanExpr e;
    e.name = std::move(name);
    return e;
}

namespace {

BooleanExpr combine(BooleanExpr::Kind kind, std::vector<BooleanExpr> operands) {
    if (operands.empty()) throw DataError("operator needs at least one operand");
    if (operands.size() == 1) return std::move(operands.front());
    BooleanExpr e;
    e.kind = kind;
    for (auto& op : operands) {
        if (op.kind == kind) {
            std::move(op.children.begin(), op.children.end(), std::back_inserter(e.children));
        } else {
            e.children.push_back(std::move(op));
        }
    }
    return e;
}

}  // namespace

BooleanExpr BooleanExpr::conj(std::vector<BooleanExpr> operands) { return combine(Kind::and_, std::move(operands)); }

BooleanExpr BooleanExpr::exclusive(std::vector<BooleanExpr> operands) {
    return combine(Kind::xor_, std::move(operands));
}

std::set<std::string> BooleanExpr::literals() const {
    if (kind == Kind::literal) return {name};
    std::set<std::string> out;
    for (const auto& c : children) {
        auto sub = c.literals();
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

bool BooleanExpr::evaluate(const std::set<std::string>& true_literals) const {
    switch (kind) {
        case Kind::literal: return true_literals.count(name) != 0;
        case Kind::and_:
            return std::all_of(children.begin(), children.end(),
                               [&](const BooleanExpr& c) { return c.evaluate(true_literals); });
        case Kind::xor_: {
            bool acc = false;
            for (const auto& c : children) acc ^= c.evaluate(true_literals);
            return acc;
        }
    }
    return false;
}

BooleanExpr or_formula(const Alternatives& alternatives) {
    if (alternatives.empty()) throw DataError("OR formula needs at least one alternative");
    std::vector<BooleanExpr> branches;
    for (const auto& alt : alternatives) {
        std::set<std::string> names;
        for (const auto& el : alt) names.insert(el.begin(), el.end());
        if (names.empty()) throw DataError("OR alternative is empty");
        std::vector<BooleanExpr> lits;
        for (const auto& n : names) lits.push_back(BooleanExpr::literal(n));
        branches.push_back(BooleanExpr::conj(std::move(lits)));
    }
    return BooleanExpr::exclusive(std::move(branches));
}

namespace {

/// Literal names of a branch that is a literal or a conjunction of literals;
/// nullopt for anything deeper.
std::optional<std::set<std::string>> flat_literals(const BooleanExpr& e) {
    if (e.kind == BooleanExpr::Kind::literal) return std::set<std::string>{e.name};
    if (e.kind != BooleanExpr::Kind::and_) return std::nullopt;
    std::set<std::string> out;
    for (const auto& c : e.children) {
        if (c.kind != BooleanExpr::Kind::literal) return std::nullopt;
        out.insert(c.name);
    }
    return out;
}

BooleanExpr conj_of(const std::set<std::string>& names) {
    std::vector<BooleanExpr> lits;
    for (const auto& n : names) lits.push_back(BooleanExpr::literal(n));
    return BooleanExpr::conj(std::move(lits));
}

}  // namespace

BooleanExpr factor(const BooleanExpr& expr) {
    if (expr.kind == BooleanExpr::Kind::literal) return expr;
    std::vector<BooleanExpr> children;
    for (const auto& c : expr.children) children.push_back(factor(c));
    if (expr.kind == BooleanExpr::Kind::and_) return BooleanExpr::conj(std::move(children));

    std::vector<std::set<std::string>> branches;
    for (const auto& c : children) {
        auto lits = flat_literals(c);
        if (!lits) return BooleanExpr::exclusive(std::move(children));
        branches.push_back(*lits);
    }
    std::set<std::string> common = branches.front();
    for (const auto& b : branches) {
        std::set<std::string> keep;
        std::set_intersection(common.begin(), common.end(), b.begin(), b.end(), std::inserter(keep, keep.end()));
        common = std::move(keep);
    }
    if (common.empty()) return BooleanExpr::exclusive(std::move(children));
    std::vector<BooleanExpr> rest;
    for (const auto& b : branches) {
        std::set<std::string> r;
        std::set_difference(b.begin(), b.end(), common.begin(), common.end(), std::inserter(r, r.end()));
        // (c∧X)⊕c would need a constant to factor; leave it alone.
        if (r.empty()) return BooleanExpr::exclusive(std::move(children));
        rest.push_back(conj_of(r));
    }
    std::vector<BooleanExpr> parts;
    for (const auto& n : common) parts.push_back(BooleanExpr::literal(n));
    parts.push_back(BooleanExpr::exclusive(std::move(rest)));
    return BooleanExpr::conj(std::move(parts));
}

std::string to_string(const BooleanExpr& expr, bool ascii) {
    if (expr.kind == BooleanExpr::Kind::literal) return expr.name;
    const bool is_and = expr.kind == BooleanExpr::Kind::and_;
    const char* op = is_and ? (ascii ? "&" : "∧") : (ascii ? "^" : "⊕");
    std::string out;
    for (std::size_t i = 0; i < expr.children.size(); ++i) {
        const auto& c = expr.children[i];
        if (i) out += op;
        if (c.kind == BooleanExpr::Kind::literal)
            out += to_string(c, ascii);
        else
            out += "(" + to_string(c, ascii) + ")";
    }
    return out;
}

namespace {

/// Gateways reachable from `id` through gateway nodes only (including `id`).
void collect_gateways(const UCXGraph& g, const std::string& id, bool forward, std::set<std::string>& out) {
    if (!out.insert(id).second) return;
    for (const auto& next : forward ? g.successors(id) : g.predecessors(id)) {
        if (g.is_gateway(next)) collect_gateways(g, next, forward, out);
    }
}

}  // namespace

UCXGraph render_factored(const UCXGraph& graph) {
    const Direction dir = graph.direction();
    const bool split = dir == Direction::split;

    // Gateways owned by OR rows (the OR node plus its inner AND gateways).
    std::set<std::string> dropped;
    for (const auto& [id, alts] : graph.or_alternatives()) collect_gateways(graph, id, split, dropped);

    UCXGraph out(dir);
    for (const auto& a : graph.activities()) out.add_activity(a);
    for (const auto& [id, gw] : graph.gateways())
        if (!dropped.count(id)) out.add_gateway(gw);
    for (const auto& [from, to] : graph.edges())
        if (!dropped.count(from) && !dropped.count(to)) out.add_edge(from, to);

    auto link = [&](const std::string& from, const std::string& to) {
        if (split)
            out.add_edge(from, to);
        else
            out.add_edge(to, from);
    };

    for (const auto& [id, alts] : graph.or_alternatives()) {
        const auto& gw = graph.gateways().at(id);
        auto owners = split ? graph.predecessors(id) : graph.successors(id);
        if (owners.size() != 1) throw InvariantError("OR gateway '" + id + "' has no unique owner");
        const std::string& owner = owners.front();
        std::size_t counter = 0;
        auto new_gateway = [&](GatewayKind kind) {
            GatewayNode node{gateway_id(kind, dir, gw.row) + "s" + std::to_string(++counter), kind, dir, gw.row};
            out.add_gateway(node);
            return node.id;
        };
        auto emit_branch = [&](const std::string& from, const BooleanExpr& e) {
            if (e.kind == BooleanExpr::Kind::literal) {
                link(from, e.name);
                return;
            }
            auto and_id = new_gateway(GatewayKind::and_);
            link(from, and_id);
            for (const auto& c : e.children) link(and_id, c.name);
        };
        auto emit_xor = [&](const std::string& from, const BooleanExpr& e) {
            if (e.kind != BooleanExpr::Kind::xor_) {
                emit_branch(from, e);
                return;
            }
            auto xor_id = new_gateway(GatewayKind::xor_);
            link(from, xor_id);
            for (const auto& c : e.children) emit_branch(xor_id, c);
        };

        BooleanExpr f = factor(or_formula(alts));
        if (f.kind == BooleanExpr::Kind::and_ && f.children.back().kind == BooleanExpr::Kind::xor_) {
            auto and_id = new_gateway(GatewayKind::and_);
            link(owner, and_id);
            for (std::size_t i = 0; i + 1 < f.children.size(); ++i) link(and_id, f.children[i].name);
            emit_xor(and_id, f.children.back());
        } else {
            emit_xor(owner, f);
        }
    }
    out.validate();
    return out;
}

std::map<std::string, std::string> simplify_report(const UCXGraph& graph, bool ascii, bool factored) {
    std::map<std::string, std::string> out;
    for (const auto& [id, alts] : graph.or_alternatives()) {
        auto f = or_formula(alts);
        out[id] = to_string(factored ? factor(f) : f, ascii);
    }
    return out;
}

}  // namespace ucx
