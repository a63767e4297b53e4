#pragma once

// Per-partition causal discovery: precedence statistics, the precedence
// blacklist and a pluggable discovery backend (DirectLiNGAM-style default).

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ucx/cx_model.hpp"
#include "ucx/event_log.hpp"

namespace ucx {

/// Pairwise strict-precedence proportions over the traces of one partition.
struct PrecedenceStats {
    std::vector<std::string> activities;
    std::size_t traces = 0;
    /// precedes[i * n + j]: fraction of traces where activities[i] happens
    /// strictly before activities[j]. Ties count in neither direction.
    std::vector<double> precedes;

    std::size_t index(const std::string& activity) const;
    /// p_{before -> after}.
    double proportion(const std::string& before, const std::string& after) const;
};

PrecedenceStats precedence_stats(const TimestampTable& table);
PrecedenceStats precedence_stats(const Partition& partition, RepeatPolicy policy = RepeatPolicy::first);

/// Forbidden directed edges (cause, effect).
using Blacklist = std::set<Edge>;

/// (B, A) is forbidden iff p_{B -> A} <= theta.
Blacklist build_blacklist(const PrecedenceStats& stats, double theta);

/// How absolute timestamps are turned into the variables fed to discovery.
enum class Anchor {
    none,         // absolute times (shifted by the partition minimum)
    first_event,  // time since the trace's first event
};

Anchor parse_anchor(std::string_view text);

struct DiscoveryConfig {
    double theta = 0.05;
    double coeff_prune = 0.05;
    std::size_t min_traces = 10;
    std::string backend = "direct-lingam";
    RepeatPolicy repeat_policy = RepeatPolicy::first;
    Anchor anchor = Anchor::none;
    /// Exclude traces that order a blacklisted pair the forbidden way from the
    /// data handed to the backend (they still count in the statistics).
    bool filter_violations = true;

    /// Throws DataError when a field is out of range.
    void validate() const;
};

/// Input handed to a backend: a dense table of real-valued activity times.
struct DiscoveryProblem {
    std::vector<std::string> activities;
    std::size_t rows = 0;
    std::vector<double> data;  // row-major rows x activities.size()
    /// forbidden[i * n + j]: edge activities[i] -> activities[j] may not appear.
    std::vector<char> forbidden;
    double coeff_prune = 0.05;

    bool is_forbidden(std::size_t cause, std::size_t effect) const {
        return forbidden[cause * activities.size() + effect] != 0;
    }
};

class DiscoveryBackend {
  public:
    virtual ~DiscoveryBackend() = default;
    /// Must return a DAG over problem.activities without forbidden edges.
    virtual CXGraph discover(const DiscoveryProblem& problem, std::vector<std::string>& warnings) const = 0;
};

using BackendFactory = std::function<std::unique_ptr<DiscoveryBackend>()>;

void register_backend(const std::string& name, BackendFactory factory);
std::unique_ptr<DiscoveryBackend> make_backend(const std::string& name);
std::vector<std::string> backend_names();

struct DiscoveryOutcome {
    CXGraph graph;
    /// Too few traces: `graph` holds the activities without edges.
    bool skipped = false;
    std::size_t traces = 0;
    Blacklist blacklist;
    std::vector<std::string> warnings;
};

DiscoveryOutcome discover_cx(const Partition& partition, const DiscoveryConfig& config = {});

}  // namespace ucx
