#pragma once

// Executable oracles: soundness/completeness checkers for unified graphs, a
// brute-force family classifier, a synthetic event-log generator with known
// causal structure, and random instance / mutation generators.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ucx/cx_model.hpp"
#include "ucx/event_log.hpp"
#include "ucx/unification.hpp"

namespace ucx {

struct Violation {
    std::string node;
    std::vector<std::string> group;  // offending group, or the missing target
    std::string narrative;
};

struct VerificationReport {
    bool sound = true;
    bool complete = true;
    std::vector<Violation> violations;

    bool ok() const { return sound && complete; }
};

constexpr std::size_t kDefaultNodeBound = 12;

/// Every group admitted by the gateway semantics at every activity (after
/// expanding AND composites) equals some input graph's neighbor set there.
/// Structural problems (arity, OR coverage, unrealizable alternatives,
/// cycles, node conservation) also make the graph unsound. Throws
/// BoundExceeded when the graphs span more than `bound` activities.
VerificationReport check_soundness(const UCXGraph& unified, const std::vector<CXGraph>& inputs,
                                   std::size_t bound = kDefaultNodeBound);

/// Every non-empty neighbor set of every input graph is an admitted group.
/// Missing targets are reported as "(n_j,n) of g_i".
VerificationReport check_completeness(const UCXGraph& unified, const std::vector<CXGraph>& inputs,
                                      std::size_t bound = kDefaultNodeBound);

/// Both checks, violations concatenated.
VerificationReport verify(const UCXGraph& unified, const std::vector<CXGraph>& inputs,
                          std::size_t bound = kDefaultNodeBound);

/// Activity -> admitted groups (sorted activity lists). Split graphs use
/// out-neighbors, join graphs in-neighbors.
std::map<std::string, std::set<std::vector<std::string>>> admissible_groups(const UCXGraph& unified,
                                                                             std::size_t bound = kDefaultNodeBound);

/// Reference classification by enumeration over bitmasks. Refuses (BoundExceeded)
/// when the family spans more than 16 nodes.
RowAnnotation classify_oracle(const std::vector<NodeSet>& family);

/// Edge-reversed copy with every gateway switched to the other direction
/// (ids _C <-> _J).
UCXGraph mirrored(const UCXGraph& graph);

// ---------------------------------------------------------------------------
// Random instances

/// Random DAG over `names` (a random topological order, each forward pair an
/// edge with probability `density`).
CXGraph random_dag(const std::vector<std::string>& names, double density, std::mt19937_64& rng);

/// 1..max_graphs random DAGs, each over a random non-empty subset of the first
/// `max_nodes` lowercase letters, with a random density. All graphs of one
/// instance respect a common activity order.
std::vector<CXGraph> random_graph_set(std::uint64_t seed, std::size_t max_nodes = 8, std::size_t max_graphs = 5);

enum class FamilyShape { random, exclusive, exhaustive, overlapping };

/// Random family over a universe of at most `max_universe` letters. The
/// exclusive/exhaustive shapes are XOR/OR^E by construction; overlapping
/// contains two sets with a partial intersection.
std::vector<NodeSet> random_family(std::mt19937_64& rng, std::size_t max_universe, FamilyShape shape);

/// Edges whose addition must be flagged: from any node to an activity outside
/// the union of input neighbor sets of the node's owning activity. Edges are
/// given in graph orientation.
std::vector<Edge> detectable_additions(const UCXGraph& unified, const std::vector<CXGraph>& inputs);

// ---------------------------------------------------------------------------
// Synthetic logs

enum class NoiseKind { uniform, laplace };

NoiseKind parse_noise_kind(std::string_view text);

/// How an order flip is logged: `shift` records the effect 1 ms before its
/// cause; `swap` exchanges the two timestamps.
enum class FlipMode { shift, swap };

FlipMode parse_flip_mode(std::string_view text);

struct SyntheticSpec {
    CXGraph dag;
    /// Edge weights; 1 when absent. Child time = sum over parents of
    /// weight * (parent time + delay) + noise.
    std::map<Edge, double> weights;
    /// Per-edge delay in seconds; `default_delay` when absent.
    std::map<Edge, double> delays;
    double default_delay = 5.0;
    NoiseKind noise = NoiseKind::uniform;
    double noise_scale = 10.0;  // seconds; uniform width or laplace scale
    double root_scale = 10.0;   // seconds of root jitter
    /// Per trace and edge, probability that the effect is logged out of order.
    double flip_rate = 0.0;
    FlipMode flip_mode = FlipMode::shift;
    std::size_t traces = 2000;
    std::uint64_t seed = 0;
    Millis origin = 1'600'000'000'000;

    void validate() const;
};

EventLog gen_synthetic_log(const SyntheticSpec& spec);

/// Random ground-truth DAG over activities A, B, ..., Z, AA, AB, ... with at
/// least one edge; weights in [1, 1.5] and delays in [1, 10] seconds. Weights
/// of at least one keep every cause ahead of its effects when the noise is
/// non-negative.
SyntheticSpec random_synthetic_spec(std::size_t activities, double density, std::uint64_t seed);

std::string to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(std::string_view text);

}  // namespace ucx
