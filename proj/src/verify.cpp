#include "ucx/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include <json.hpp>

#include "ucx/errors.hpp"

namespace ucx {

namespace {

using Mask = std::uint32_t;
using Groups = std::set<Mask>;

Groups product(const Groups& a, const Groups& b) {
    Groups out;
    for (auto x : a)
        for (auto y : b) out.insert(x | y);
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

/// Bitmask view of a unified graph and its inputs. Group enumeration follows
/// the graph orientation: out-neighbors for split, in-neighbors for join.
class Checker {
  public:
    Checker(const UCXGraph& unified, const std::vector<CXGraph>& inputs, std::size_t bound)
        : u_(unified), inputs_(inputs), split_(unified.direction() == Direction::split) {
        std::set<std::string> all(unified.activities());
        for (const auto& g : inputs) all.insert(g.nodes().begin(), g.nodes().end());
        if (all.size() > bound || all.size() > 31)
            throw BoundExceeded("verification spans " + std::to_string(all.size()) + " activities; bound is " +
                                std::to_string(bound));
        names_.assign(all.begin(), all.end());
        for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<int>(i);
    }

    std::vector<std::string> next(const std::string& id) const {
        return split_ ? u_.successors(id) : u_.predecessors(id);
    }

    Mask bit(const std::string& activity) const { return Mask{1} << index_.at(activity); }

    std::vector<std::string> names_of(Mask m) const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (m & (Mask{1} << i)) out.push_back(names_[i]);
        return out;
    }

    Mask input_set(const CXGraph& g, const std::string& activity) const {
        Mask m = 0;
        for (const auto& n : split_ ? g.children(activity) : g.parents(activity)) m |= bit(n);
        return m;
    }

    /// Groups admitted at an activity: product over all its neighbors.
    Groups at_activity(const std::string& activity) {
        Groups acc{0};
        for (const auto& n : next(activity)) acc = product(acc, groups_of(n));
        return acc;
    }

    Groups groups_of(const std::string& id) {
        if (u_.is_activity(id)) return {bit(id)};
        if (auto it = memo_.find(id); it != memo_.end()) return it->second;
        if (!active_.insert(id).second) {
            structural("cycle through gateway " + id, id);
            return {};
        }
        const auto& gw = u_.gateways().at(id);
        auto children = next(id);
        Groups out;
        switch (gw.kind) {
            case GatewayKind::and_:
                out = {0};
                for (const auto& c : children) out = product(out, groups_of(c));
                break;
            case GatewayKind::xor_:
                for (const auto& c : children) {
                    auto g = groups_of(c);
                    out.insert(g.begin(), g.end());
                }
                break;
            case GatewayKind::or_exhaustive:
                if (children.size() > 16)
                    throw BoundExceeded("exhaustive OR " + id + " has more than 16 children");
                // Union over non-empty subsets of children, built incrementally.
                for (const auto& c : children) {
                    auto g = groups_of(c);
                    Groups next_out = out;
                    next_out.insert(g.begin(), g.end());
                    auto extended = product(out, g);
                    next_out.insert(extended.begin(), extended.end());
                    out = std::move(next_out);
                }
                break;
            case GatewayKind::or_:
                out = or_groups(id, children);
                break;
        }
        active_.erase(id);
        memo_[id] = out;
        return out;
    }

    void structural(const std::string& narrative, const std::string& node) {
        if (reported_.insert(narrative).second) structural_.push_back({node, {}, narrative});
    }

    std::vector<Violation> structural_violations() {
        std::vector<Violation> out = structural_;
        for (const auto& p : u_.problems()) out.push_back({"", {}, p});
        // Node conservation.
        std::set<std::string> input_nodes;
        for (const auto& g : inputs_) input_nodes.insert(g.nodes().begin(), g.nodes().end());
        for (const auto& a : u_.activities())
            if (!input_nodes.count(a)) out.push_back({a, {}, "activity " + a + " appears in no input graph"});
        for (const auto& a : input_nodes)
            if (!u_.is_activity(a)) out.push_back({a, {}, "input activity " + a + " is missing from the unified graph"});
        return out;
    }

    const std::vector<std::string>& names() const { return names_; }

  private:
    /// Recorded alternatives, each element resolved against an actual child:
    /// a single activity must be a direct child, a composite must be a child
    /// gateway admitting exactly that group.
    Groups or_groups(const std::string& id, const std::vector<std::string>& children) {
        Groups out;
        auto it = u_.or_alternatives().find(id);
        if (it == u_.or_alternatives().end()) {
            structural("OR gateway " + id + " has no recorded alternatives", id);
            return out;
        }
        std::map<std::string, Groups> child_groups;
        for (const auto& c : children) child_groups[c] = groups_of(c);
        for (const auto& alt : it->second) {
            Groups acc{0};
            bool realizable = true;
            for (const auto& el : alt) {
                Mask want = 0;
                bool known = true;
                for (const auto& x : el) {
                    if (!index_.count(x)) {
                        known = false;
                        break;
                    }
                    want |= bit(x);
                }
                bool found = false;
                if (known) {
                    for (const auto& [c, g] : child_groups) {
                        if ((el.size() == 1) == u_.is_activity(c) && g == Groups{want}) {
                            found = true;
                            break;
                        }
                    }
                }
                if (!found) {
                    realizable = false;
                    break;
                }
                acc = product(acc, Groups{want});
            }
            if (realizable) {
                out.insert(acc.begin(), acc.end());
            } else {
                structural("OR gateway " + id + " alternative " + format_alternatives({alt}) +
                               " does not match its targets",
                           id);
            }
        }
        return out;
    }

    const UCXGraph& u_;
    const std::vector<CXGraph>& inputs_;
    bool split_;
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
    std::map<std::string, Groups> memo_;
    std::set<std::string> active_;
    std::vector<Violation> structural_;
    std::set<std::string> reported_;
};

std::string graph_label(std::size_t i) { return "g" + std::to_string(i + 1); }

}  // namespace

VerificationReport check_soundness(const UCXGraph& unified, const std::vector<CXGraph>& inputs, std::size_t bound) {
    Checker checker(unified, inputs, bound);
    VerificationReport report;
    for (const auto& a : unified.activities()) {
        if (checker.next(a).empty()) continue;
        for (Mask m : checker.at_activity(a)) {
            bool matched = std::any_of(inputs.begin(), inputs.end(), [&](const CXGraph& g) {
                return g.has_node(a) && checker.input_set(g, a) == m;
            });
            if (!matched) {
                auto group = checker.names_of(m);
                report.violations.push_back(
                    {a, group, "group {" + join(group) + "} at " + a + " is expressed by no input graph"});
            }
        }
    }
    for (auto& v : checker.structural_violations()) report.violations.push_back(std::move(v));
    report.sound = report.violations.empty();
    return report;
}

VerificationReport check_completeness(const UCXGraph& unified, const std::vector<CXGraph>& inputs,
                                      std::size_t bound) {
    Checker checker(unified, inputs, bound);
    const bool split = unified.direction() == Direction::split;
    VerificationReport report;
    std::map<std::string, Groups> admitted;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& g = inputs[i];
        for (const auto& a : g.nodes()) {
            Mask want = checker.input_set(g, a);
            if (want == 0) continue;
            if (!unified.is_activity(a)) {
                report.violations.push_back({a, {}, "node " + a + " of " + graph_label(i) + " is missing"});
                continue;
            }
            auto it = admitted.find(a);
            if (it == admitted.end()) it = admitted.emplace(a, checker.at_activity(a)).first;
            if (it->second.count(want)) continue;
            // Name the targets no admitted sub-group can reach.
            Mask reachable = 0;
            for (Mask m : it->second)
                if ((m & ~want) == 0) reachable |= m;
            Mask missing = want & ~reachable;
            if (missing == 0) {
                auto group = checker.names_of(want);
                report.violations.push_back({a, group,
                                             "group {" + join(group) + "} of " + graph_label(i) + " at " + a +
                                                 " is not admitted"});
                continue;
            }
            for (const auto& n : checker.names_of(missing)) {
                std::string edge = split ? "(" + a + "," + n + ")" : "(" + n + "," + a + ")";
                report.violations.push_back({a, {n}, "missing " + edge + " of " + graph_label(i)});
            }
        }
    }
    report.complete = report.violations.empty();
    return report;
}

VerificationReport verify(const UCXGraph& unified, const std::vector<CXGraph>& inputs, std::size_t bound) {
    auto s = check_soundness(unified, inputs, bound);
    auto c = check_completeness(unified, inputs, bound);
    VerificationReport out;
    out.sound = s.sound;
    out.complete = c.complete;
    out.violations = std::move(s.violations);
    for (auto& v : c.violations) out.violations.push_back(std::move(v));
    return out;
}

std::map<std::string, std::set<std::vector<std::string>>> admissible_groups(const UCXGraph& unified,
                                                                             std::size_t bound) {
    std::vector<CXGraph> none;
    Checker checker(unified, none, bound);
    std::map<std::string, std::set<std::vector<std::string>>> out;
    for (const auto& a : unified.activities()) {
        auto& groups = out[a];
        if (checker.next(a).empty()) continue;
        for (Mask m : checker.at_activity(a)) groups.insert(checker.names_of(m));
    }
    return out;
}

RowAnnotation classify_oracle(const std::vector<NodeSet>& family) {
    std::map<std::string, int> index;
    for (const auto& s : family)
        for (const auto& x : s) index.emplace(x, 0);
    if (index.size() > 16) throw BoundExceeded("family spans more than 16 nodes");
    int next = 0;
    for (auto& [x, i] : index) i = next++;

    std::set<Mask> distinct;
    for (const auto& s : family) {
        Mask m = 0;
        for (const auto& x : s) m |= Mask{1} << index[x];
        if (m) distinct.insert(m);
    }
    std::vector<Mask> f(distinct.begin(), distinct.end());
    if (f.empty()) return RowAnnotation::none;
    if (f.size() == 1) return std::popcount(f.front()) >= 2 ? RowAnnotation::and_ : RowAnnotation::none;

    bool pairwise_disjoint = true;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (f[i] & f[j]) pairwise_disjoint = false;
    if (pairwise_disjoint) return RowAnnotation::xor_;

    // Atoms: groups that never partially overlap another member, plus every
    // node covered by none of them.
    std::vector<Mask> atoms;
    Mask covered = 0, universe = 0;
    for (auto s : f) {
        universe |= s;
        bool promoted = true;
        for (auto t : f)
            if (t != s && (s & t) && (s & ~t)) promoted = false;
        if (promoted) {
            atoms.push_back(s);
            covered |= s;
        }
    }
    for (int b = 0; b < 32; ++b)
        if ((universe & ~covered) & (Mask{1} << b)) atoms.push_back(Mask{1} << b);

    std::set<Mask> unions;
    for (std::uint32_t pick = 1; pick < (std::uint32_t{1} << atoms.size()); ++pick) {
        Mask m = 0;
        for (std::size_t a = 0; a < atoms.size(); ++a)
            if (pick & (1u << a)) m |= atoms[a];
        unions.insert(m);
    }
    if (unions == distinct) return RowAnnotation::or_exhaustive;
    return RowAnnotation::or_;
}

UCXGraph mirrored(const UCXGraph& graph) {
    const Direction dir = graph.direction() == Direction::split ? Direction::join : Direction::split;
    auto rename = [&](const std::string& id) {
        if (!graph.is_gateway(id)) return id;
        std::string out = id;
        auto from = graph.direction() == Direction::split ? "_C" : "_J";
        auto to = graph.direction() == Direction::split ? "_J" : "_C";
        if (auto pos = out.find(from); pos != std::string::npos) out.replace(pos, 2, to);
        return out;
    };
    UCXGraph out(dir);
    for (const auto& a : graph.activities()) out.add_activity(a);
    for (const auto& [id, gw] : graph.gateways()) {
        GatewayNode copy = gw;
        copy.id = rename(id);
        copy.direction = dir;
        out.add_gateway(copy);
    }
    for (const auto& [from, to] : graph.edges()) out.add_edge(rename(to), rename(from));
    for (const auto& [id, alts] : graph.or_alternatives()) out.set_alternatives(rename(id), alts);
    return out;
}

// ---------------------------------------------------------------------------
// Random instances

CXGraph random_dag(const std::vector<std::string>& names, double density, std::mt19937_64& rng) {
    CXGraph g(std::set<std::string>(names.begin(), names.end()));
    std::vector<std::string> order = names;
    std::shuffle(order.begin(), order.end(), rng);
    std::bernoulli_distribution coin(density);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (coin(rng)) g.add_edge(order[i], order[j]);
    return g;
}

std::vector<CXGraph> random_graph_set(std::uint64_t seed, std::size_t max_nodes, std::size_t max_graphs) {
    if (max_nodes == 0 || max_nodes > 26 || max_graphs == 0) throw DataError("invalid random graph set bounds");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> graphs_dist(1, max_graphs);
    std::uniform_real_distribution<double> density_dist(0.1, 0.8);
    std::bernoulli_distribution half(0.5);
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < max_nodes; ++i) pool.push_back(std::string(1, static_cast<char>('a' + i)));

    // One activity order per instance: graphs that disagree on direction
    // have no acyclic unification.
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<CXGraph> out;
    auto count = graphs_dist(rng);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<std::string> names;
        while (names.empty()) {
            for (const auto& n : pool)
                if (half(rng)) names.push_back(n);
        }
        CXGraph g(std::set<std::string>(names.begin(), names.end()));
        std::bernoulli_distribution coin(density_dist(rng));
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (coin(rng)) g.add_edge(names[i], names[j]);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<NodeSet> random_family(std::mt19937_64& rng, std::size_t max_universe, FamilyShape shape) {
    if (max_universe < 2 || max_universe > 26) throw DataError("universe bound must lie in [2, 26]");
    std::uniform_int_distribution<std::size_t> size_dist(2, max_universe);
    const std::size_t k = size_dist(rng);
    std::vector<std::string> letters;
    for (std::size_t i = 0; i < k; ++i) letters.push_back(std::string(1, static_cast<char>('a' + i)));
    std::bernoulli_distribution half(0.5);

    // Random partition of the letters into at least two non-empty groups.
    auto blocks = [&](std::size_t max_blocks) {
        std::uniform_int_distribution<std::size_t> nb(2, std::min(k, max_blocks));
        std::size_t n = nb(rng);
        std::vector<NodeSet> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i].insert(letters[i]);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t i = n; i < k; ++i) out[pick(rng)].insert(letters[i]);
        std::shuffle(out.begin(), out.end(), rng);
        return out;
    };
    auto random_subset = [&] {
        NodeSet s;
        while (s.empty()) {
            for (const auto& x : letters)
                if (half(rng)) s.insert(x);
        }
        return s;
    };

    std::vector<NodeSet> family;
    switch (shape) {
        case FamilyShape::exclusive: {
            family = blocks(k);
            // Optionally leave some letters unused.
            if (family.size() > 2 && half(rng)) family.pop_back();
            break;
        }
        case FamilyShape::exhaustive: {
            auto atoms = blocks(4);
            for (std::uint32_t pick = 1; pick < (1u << atoms.size()); ++pick) {
                NodeSet s;
                for (std::size_t a = 0; a < atoms.size(); ++a)
                    if (pick & (1u << a)) s.insert(atoms[a].begin(), atoms[a].end());
                family.push_back(s);
            }
            break;
        }
        case FamilyShape::overlapping: {
            std::vector<std::string> shuffled = letters;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            family.push_back({shuffled[0], shuffled[1]});
            family.push_back({shuffled[0]});
            if (k >= 3) family.back().insert(shuffled[2]);
            std::uniform_int_distribution<std::size_t> extra(0, 4);
            for (std::size_t n = extra(rng); n > 0; --n) family.push_back(random_subset());
            break;
        }
        case FamilyShape::random: {
            std::uniform_int_distribution<std::size_t> count(1, 8);
            for (std::size_t n = count(rng); n > 0; --n) family.push_back(random_subset());
            break;
        }
    }
    std::shuffle(family.begin(), family.end(), rng);
    return family;
}

std::vector<Edge> detectable_additions(const UCXGraph& unified, const std::vector<CXGraph>& inputs) {
    const bool split = unified.direction() == Direction::split;
    auto back = [&](const std::string& id) { return split ? unified.predecessors(id) : unified.successors(id); };
    auto owner_of = [&](std::string id) -> std::optional<std::string> {
        std::set<std::string> seen;
        while (unified.is_gateway(id)) {
            if (!seen.insert(id).second) return std::nullopt;
            auto prev = back(id);
            if (prev.size() != 1) return std::nullopt;
            id = prev.front();
        }
        return id;
    };

    std::vector<Edge> out;
    std::vector<std::string> sources(unified.activities().begin(), unified.activities().end());
    for (const auto& [id, gw] : unified.gateways()) sources.push_back(id);
    for (const auto& x : sources) {
        auto owner = owner_of(x);
        if (!owner) continue;
        std::set<std::string> neighbors;
        for (const auto& g : inputs) {
            if (!g.has_node(*owner)) continue;
            auto n = split ? g.children(*owner) : g.parents(*owner);
            neighbors.insert(n.begin(), n.end());
        }
        for (const auto& y : unified.activities()) {
            if (y == x || y == *owner || neighbors.count(y)) continue;
            Edge e = split ? Edge{x, y} : Edge{y, x};
            if (!unified.has_edge(e.first, e.second)) out.push_back(e);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic logs

FlipMode parse_flip_mode(std::string_view text) {
    if (text == "shift") return FlipMode::shift;
    if (text == "swap") return FlipMode::swap;
    throw DataError("unknown flip mode '" + std::string(text) + "' (shift|swap)");
}

NoiseKind parse_noise_kind(std::string_view text) {
    if (text == "uniform") return NoiseKind::uniform;
    if (text == "laplace") return NoiseKind::laplace;
    throw DataError("unknown noise kind '" + std::string(text) + "' (uniform|laplace)");
}

void SyntheticSpec::validate() const {
    dag.validate();
    for (const auto& [e, w] : weights) {
        if (!dag.has_edge(e.first, e.second)) throw DataError("weight given for absent edge " + e.first + "->" + e.second);
        if (!std::isfinite(w)) throw DataError("edge weights must be finite");
    }
    for (const auto& [e, d] : delays) {
        if (!dag.has_edge(e.first, e.second)) throw DataError("delay given for absent edge " + e.first + "->" + e.second);
        if (!std::isfinite(d)) throw DataError("edge delays must be finite");
    }
    if (!std::isfinite(default_delay)) throw DataError("default delay must be finite");
    if (!(noise_scale > 0.0) || !std::isfinite(noise_scale))
        throw DataError("noise scale must be positive: Gaussian-free noise is required");
    if (!(root_scale >= 0.0) || !std::isfinite(root_scale)) throw DataError("root scale must be >= 0");
    if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw DataError("flip rate must lie in [0, 1]");
}

EventLog gen_synthetic_log(const SyntheticSpec& spec) {
    spec.validate();
    auto order = *spec.dag.topological_order();
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    auto noise = [&] {
        if (spec.noise == NoiseKind::uniform) return spec.noise_scale * unit(rng);
        return spec.noise_scale * (expo(rng) - expo(rng));
    };
    std::vector<Edge> edges;
    for (const auto& [e, c] : spec.dag.edges()) edges.push_back(e);

    std::vector<Trace> traces;
    traces.reserve(spec.traces);
    std::vector<double> t(order.size());
    const int width = std::max<int>(1, static_cast<int>(std::to_string(spec.traces).size()));
    for (std::size_t k = 0; k < spec.traces; ++k) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto& node = order[i];
            auto parents = spec.dag.parents(node);
            if (parents.empty()) {
                t[i] = spec.root_scale * unit(rng);
                continue;
            }
            double v = 0.0;
            for (const auto& p : parents) {
                Edge e{p, node};
                auto w = spec.weights.find(e);
                auto d = spec.delays.find(e);
                v += (w == spec.weights.end() ? 1.0 : w->second) *
                     (t[pos[p]] + (d == spec.delays.end() ? spec.default_delay : d->second));
            }
            t[i] = v + noise();
        }
        if (spec.flip_rate > 0.0) {
            for (const auto& e : edges)
                if (unit(rng) < spec.flip_rate) {
                    if (spec.flip_mode == FlipMode::shift)
                        t[pos[e.second]] = t[pos[e.first]] - 0.001;
                    else
                        std::swap(t[pos[e.first]], t[pos[e.second]]);
                }
        }
        char id[32];
        std::snprintf(id, sizeof id, "case%0*zu", width, k + 1);
        Trace trace{id, {}};
        for (std::size_t i = 0; i < order.size(); ++i)
            trace.events.push_back({id, order[i], spec.origin + static_cast<Millis>(std::llround(t[i] * 1000.0)), {}});
        traces.push_back(std::move(trace));
    }
    return EventLog(std::move(traces));
}

SyntheticSpec random_synthetic_spec(std::size_t activities, double density, std::uint64_t seed) {
    if (activities < 2 || activities > 702) throw DataError("synthetic specs need 2..702 activities");
    std::mt19937_64 rng(seed);
    // Spreadsheet-style names: A..Z, then AA, AB, ...
    std::vector<std::string> names;
    for (std::size_t i = 0; i < activities; ++i) {
        if (i < 26)
            names.push_back(std::string(1, static_cast<char>('A' + i)));
        else
            names.push_back({static_cast<char>('A' + (i / 26 - 1)), static_cast<char>('A' + i % 26)});
    }
    SyntheticSpec spec;
    do {
        spec.dag = random_dag(names, density, rng);
    } while (spec.dag.edges().empty());
    std::uniform_real_distribution<double> weight(1.0, 1.5), delay(1.0, 10.0);
    for (const auto& [e, c] : spec.dag.edges()) {
        spec.weights[e] = weight(rng);
        spec.delays[e] = delay(rng);
    }
    spec.seed = seed;
    return spec;
}

std::string to_json(const SyntheticSpec& spec) {
    nlohmann::json j;
    j["activities"] = std::vector<std::string>(spec.dag.nodes().begin(), spec.dag.nodes().end());
    j["edges"] = nlohmann::json::array();
    for (const auto& [e, c] : spec.dag.edges()) {
        nlohmann::json je{{"cause", e.first}, {"effect", e.second}};
        if (auto w = spec.weights.find(e); w != spec.weights.end()) je["weight"] = w->second;
        if (auto d = spec.delays.find(e); d != spec.delays.end()) je["delay"] = d->second;
        j["edges"].push_back(je);
    }
    j["default_delay"] = spec.default_delay;
    j["noise"] = spec.noise == NoiseKind::uniform ? "uniform" : "laplace";
    j["noise_scale"] = spec.noise_scale;
    j["root_scale"] = spec.root_scale;
    j["flip_rate"] = spec.flip_rate;
    j["flip_mode"] = spec.flip_mode == FlipMode::shift ? "shift" : "swap";
    j["traces"] = spec.traces;
    j["seed"] = spec.seed;
    j["origin"] = spec.origin;
    return j.dump(2) + "\n";
}

SyntheticSpec synthetic_spec_from_json(std::string_view text) {
    try {
        auto j = nlohmann::json::parse(text);
        SyntheticSpec spec;
        for (const auto& a : j.at("activities")) spec.dag.add_node(a.get<std::string>());
        for (const auto& je : j.value("edges", nlohmann::json::array())) {
            Edge e{je.at("cause").get<std::string>(), je.at("effect").get<std::string>()};
            spec.dag.add_edge(e.first, e.second);
            if (je.contains("weight")) spec.weights[e] = je["weight"].get<double>();
            if (je.contains("delay")) spec.delays[e] = je["delay"].get<double>();
        }
        spec.default_delay = j.value("default_delay", spec.default_delay);
        spec.noise = parse_noise_kind(j.value("noise", std::string("uniform")));
        spec.noise_scale = j.value("noise_scale", spec.noise_scale);
        spec.root_scale = j.value("root_scale", spec.root_scale);
        spec.flip_rate = j.value("flip_rate", spec.flip_rate);
        spec.flip_mode = parse_flip_mode(j.value("flip_mode", std::string("shift")));
        spec.traces = j.value("traces", spec.traces);
        spec.seed = j.value("seed", spec.seed);
        spec.origin = j.value("origin", spec.origin);
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("synthetic spec: ") + e.what());
    } catch (const InvariantError& e) {
        throw ParseError(std::string("synthetic spec: ") + e.what());
    }
}

}  // namespace ucx
