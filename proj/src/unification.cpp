#include "ucx/unification.hpp"

#include <algorithm>
#include <map>

#include "ucx/errors.hpp"
#include "ucx/parallel.hpp"

namespace ucx {

std::string_view to_string(RowAnnotation a) {
    switch (a) {
        case RowAnnotation::none: return "none";
        case RowAnnotation::and_: return "AND";
        case RowAnnotation::xor_: return "XOR";
        case RowAnnotation::or_exhaustive: return "OR_E";
        case RowAnnotation::or_: return "OR";
    }
    return "?";
}

namespace {

bool partial_intersection(const NodeSet& s, const NodeSet& t) {
    bool meets = false, exceeds = false;
    for (const auto& x : s) {
        if (t.count(x))
            meets = true;
        else
            exceeds = true;
    }
    return meets && exceeds;
}

bool disjoint(const NodeSet& s, const NodeSet& t) {
    for (const auto& x : s)
        if (t.count(x)) return false;
    return true;
}

}  // namespace

FamilyClass classify_family(const std::vector<NodeSet>& input) {
    std::vector<NodeSet> family;
    for (const auto& s : input)
        if (!s.empty()) family.push_back(s);
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());

    FamilyClass out;
    if (family.empty()) return out;

    // Step 1: promote every child set that partially intersects no other.
    std::vector<NodeSet> promoted;
    for (const auto& s : family) {
        bool ok = std::none_of(family.begin(), family.end(),
                               [&](const NodeSet& t) { return &t != &s && partial_intersection(s, t); });
        if (ok) promoted.push_back(s);
    }

    // Promoted groups are pairwise disjoint, so each node maps to one atom.
    std::map<std::string, Element> atom_of;
    for (const auto& g : promoted) {
        Element el(g.begin(), g.end());
        for (const auto& x : g) atom_of[x] = el;
        if (el.size() >= 2) out.promotions.push_back(el);
    }
    NodeSet universe;
    for (const auto& s : family) universe.insert(s.begin(), s.end());
    for (const auto& x : universe) atom_of.try_emplace(x, Element{x});

    std::set<Element> atoms;
    for (const auto& [x, el] : atom_of) atoms.insert(el);
    out.atoms.assign(atoms.begin(), atoms.end());

    for (const auto& s : family) {
        std::set<Element> rewritten;
        for (const auto& x : s) rewritten.insert(atom_of.at(x));
        out.family.emplace_back(rewritten.begin(), rewritten.end());
    }
    std::sort(out.family.begin(), out.family.end());

    if (family.size() == 1) {
        out.annotation = family.front().size() >= 2 ? RowAnnotation::and_ : RowAnnotation::none;
        return out;
    }

    // Step 2: exclusive family.
    bool exclusive = true;
    for (std::size_t i = 0; i < family.size() && exclusive; ++i)
        for (std::size_t j = i + 1; j < family.size() && exclusive; ++j) exclusive = disjoint(family[i], family[j]);
    if (exclusive) {
        out.annotation = RowAnnotation::xor_;
        return out;
    }

    // Step 3: every member is a union of atoms and distinct members are
    // distinct unions, so the family is the full non-empty powerset over
    // atoms exactly when it has 2^|atoms| - 1 members.
    if (out.atoms.size() < 63 && family.size() == (std::size_t{1} << out.atoms.size()) - 1) {
        out.annotation = RowAnnotation::or_exhaustive;
        return out;
    }

    out.annotation = RowAnnotation::or_;
    return out;
}

std::vector<NodeSet> FamilyMatrix::family(std::size_t row) const {
    std::set<NodeSet> distinct;
    for (const auto& cell : cells.at(row))
        if (!cell.empty()) distinct.insert(cell);
    return {distinct.begin(), distinct.end()};
}

std::size_t FamilyMatrix::row_of(const std::string& node) const {
    auto it = std::lower_bound(row_nodes.begin(), row_nodes.end(), node);
    if (it == row_nodes.end() || *it != node) throw DataError("node '" + node + "' is not a matrix row");
    return static_cast<std::size_t>(it - row_nodes.begin());
}

FamilyMatrix build_matrix(const std::vector<CXGraph>& graphs, Direction direction,
                          std::vector<std::string> column_ids) {
    if (column_ids.empty()) {
        for (std::size_t i = 0; i < graphs.size(); ++i) column_ids.push_back("g" + std::to_string(i + 1));
    }
    if (column_ids.size() != graphs.size()) throw DataError("one column id per input graph is required");

    FamilyMatrix m;
    m.direction = direction;
    m.columns = std::move(column_ids);
    NodeSet nodes;
    for (const auto& g : graphs) nodes.insert(g.nodes().begin(), g.nodes().end());
    m.row_nodes.assign(nodes.begin(), nodes.end());
    m.cells.assign(m.row_nodes.size(), std::vector<NodeSet>(graphs.size()));
    for (std::size_t c = 0; c < graphs.size(); ++c) {
        for (const auto& [edge, coef] : graphs[c].edges()) {
            if (direction == Direction::split)
                m.cells[m.row_of(edge.first)][c].insert(edge.second);
            else
                m.cells[m.row_of(edge.second)][c].insert(edge.first);
        }
    }
    return m;
}

ORAlternativesMap classify(FamilyMatrix& matrix) {
    ORAlternativesMap alternatives;
    matrix.rows.clear();
    for (std::size_t r = 0; r < matrix.row_nodes.size(); ++r) {
        matrix.rows.push_back(classify_family(matrix.family(r)));
        if (matrix.rows.back().annotation == RowAnnotation::or_)
            alternatives[gateway_id(GatewayKind::or_, matrix.direction, r + 1)] = matrix.rows.back().family;
    }
    return alternatives;
}

UCXGraph reconstruct(const FamilyMatrix& matrix, const ORAlternativesMap& alternatives, const NodeSet& input_nodes) {
    if (!matrix.classified()) throw InvariantError("reconstruct needs a classified matrix");
    const Direction dir = matrix.direction;
    UCXGraph g(dir);
    for (const auto& n : input_nodes) g.add_activity(n);
    for (const auto& n : matrix.row_nodes) {
        if (!input_nodes.count(n)) throw InvariantError("matrix row '" + n + "' is not an input node");
    }

    // Edges are produced in split orientation and flipped for join.
    auto link = [&](const std::string& from, const std::string& to) {
        if (dir == Direction::split)
            g.add_edge(from, to);
        else
            g.add_edge(to, from);
    };
    auto add_gateway = [&](GatewayKind kind, std::size_t row, std::size_t ordinal) {
        GatewayNode node{gateway_id(kind, dir, row, ordinal), kind, dir, row};
        g.add_gateway(node);
        return node.id;
    };

    for (std::size_t i = 0; i < matrix.row_nodes.size(); ++i) {
        const auto& u = matrix.row_nodes[i];
        const FamilyClass& fc = matrix.rows[i];
        const std::size_t row = i + 1;
        if (fc.family.empty()) continue;

        // Fan an element out from `from`: direct edge or a dedicated AND gateway.
        const bool numbered = fc.promotions.size() >= 2;
        auto emit = [&](const std::string& from, const Element& el) {
            if (el.size() == 1) {
                link(from, el.front());
                return;
            }
            auto pos = std::find(fc.promotions.begin(), fc.promotions.end(), el);
            if (pos == fc.promotions.end())
                throw InvariantError("row " + u + ": composite element was never promoted");
            auto ordinal = numbered ? static_cast<std::size_t>(pos - fc.promotions.begin()) + 1 : 0;
            auto id = add_gateway(GatewayKind::and_, row, ordinal);
            link(from, id);
            for (const auto& x : el) link(id, x);
        };

        std::optional<GatewayKind> outer;
        switch (fc.annotation) {
            case RowAnnotation::none:
            case RowAnnotation::and_:
                if (fc.family.size() != 1 || fc.family.front().size() != 1)
                    throw InvariantError("row " + u + ": unannotated row with several elements");
                emit(u, fc.family.front().front());
                continue;
            case RowAnnotation::xor_: outer = GatewayKind::xor_; break;
            case RowAnnotation::or_exhaustive: outer = GatewayKind::or_exhaustive; break;
            case RowAnnotation::or_: outer = GatewayKind::or_; break;
        }
        auto id = add_gateway(*outer, row, 0);
        link(u, id);
        for (const auto& el : fc.atoms) emit(id, el);
        if (*outer == GatewayKind::or_) {
            auto it = alternatives.find(id);
            if (it == alternatives.end()) throw InvariantError("OR row " + u + " has no alternatives entry");
            g.set_alternatives(id, it->second);
        }
    }
    for (const auto& [id, alts] : alternatives) {
        auto gw = g.gateways().find(id);
        if (gw == g.gateways().end() || gw->second.kind != GatewayKind::or_)
            throw InvariantError("alternatives recorded for '" + id + "', which is not an OR gateway");
    }
    g.validate();
    return g;
}

UCXGraph unify_graphs(const std::vector<CXGraph>& graphs, Direction direction) {
    // Every unified path stands for an input edge, so inputs that disagree on
    // direction cannot be unified into a DAG.
    CXGraph merged;
    for (const auto& g : graphs) {
        g.validate();
        for (const auto& n : g.nodes()) merged.add_node(n);
        for (const auto& [e, c] : g.edges()) merged.add_edge(e.first, e.second);
    }
    if (!merged.is_acyclic()) {
        for (const auto& [e, c] : merged.edges()) {
            if (merged.has_edge(e.second, e.first))
                throw DataError("input graphs disagree on direction: both " + e.first + " -> " + e.second + " and " +
                                e.second + " -> " + e.first + " occur");
        }
        throw DataError("the union of the input graphs' edges contains a cycle");
    }
    auto matrix = build_matrix(graphs, direction);
    auto alternatives = classify(matrix);
    NodeSet nodes(matrix.row_nodes.begin(), matrix.row_nodes.end());
    return reconstruct(matrix, alternatives, nodes);
}

UnifyResult unify(const EventLog& log, const std::optional<std::vector<ActivitySequence>>& selected,
                  const UnifyConfig& config) {
    config.discovery.validate();
    UnifyResult result;
    result.partitions = partition(log, selected, config.split_by_variants);
    result.outcomes.resize(result.partitions.size());
    parallel_for(result.partitions.size(), config.jobs,
                 [&](std::size_t i) { result.outcomes[i] = discover_cx(result.partitions[i], config.discovery); });

    std::size_t usable = 0;
    std::vector<CXGraph> graphs;
    for (const auto& o : result.outcomes) {
        if (!o.skipped) ++usable;
        graphs.push_back(o.graph);
    }
    if (usable == 0)
        throw DataError("no usable partition: every partition has fewer than " +
                        std::to_string(config.discovery.min_traces) + " traces");
    result.graph = unify_graphs(graphs, config.direction);
    return result;
}

}  // namespace ucx
