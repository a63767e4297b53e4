#include "ucx/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ucx/direct_lingam.hpp"
#include "ucx/errors.hpp"

namespace ucx {

std::size_t PrecedenceStats::index(const std::string& activity) const {
    auto it = std::lower_bound(activities.begin(), activities.end(), activity);
    if (it == activities.end() || *it != activity) throw DataError("activity '" + activity + "' not in partition");
    return static_cast<std::size_t>(it - activities.begin());
}

double PrecedenceStats::proportion(const std::string& before, const std::string& after) const {
    return precedes[index(before) * activities.size() + index(after)];
}

PrecedenceStats precedence_stats(const TimestampTable& table) {
    PrecedenceStats stats;
    stats.activities = table.activities;
    stats.traces = table.rows();
    const std::size_t n = table.cols();
    std::vector<std::size_t> counts(n * n, 0);
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (table.at(r, i) < table.at(r, j)) ++counts[i * n + j];
            }
        }
    }
    stats.precedes.assign(n * n, 0.0);
    if (stats.traces == 0) return stats;
    for (std::size_t c = 0; c < counts.size(); ++c)
        stats.precedes[c] = static_cast<double>(counts[c]) / static_cast<double>(stats.traces);
    return stats;
}

PrecedenceStats precedence_stats(const Partition& partition, RepeatPolicy policy) {
    if (partition.traces.empty()) throw DataError("precedence statistics need a non-empty partition");
    return precedence_stats(timestamp_table(partition, policy));
}

Blacklist build_blacklist(const PrecedenceStats& stats, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DataError("theta must lie in [0, 1]");
    Blacklist out;
    const std::size_t n = stats.activities.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && stats.precedes[i * n + j] <= theta) out.emplace(stats.activities[i], stats.activities[j]);
        }
    }
    return out;
}

Anchor parse_anchor(std::string_view text) {
    if (text == "none") return Anchor::none;
    if (text == "first_event" || text == "first-event") return Anchor::first_event;
    throw DataError("unknown anchor '" + std::string(text) + "' (none|first_event)");
}

void DiscoveryConfig::validate() const {
    if (!(theta >= 0.0 && theta <= 0.5)) throw DataError("theta must lie in [0, 0.5]");
    if (!(coeff_prune >= 0.0) || !std::isfinite(coeff_prune)) throw DataError("coeff_prune must be >= 0");
}

// ---------------------------------------------------------------------------
// Backend registry

namespace {

struct Registry {
    std::mutex mutex;
    std::map<std::string, BackendFactory> factories;

    Registry() {
        factories["direct-lingam"] = [] { return std::make_unique<lingam::DirectLingamBackend>(); };
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

void register_backend(const std::string& name, BackendFactory factory) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    r.factories[name] = std::move(factory);
}

std::unique_ptr<DiscoveryBackend> make_backend(const std::string& name) {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.factories.find(name);
    if (it == r.factories.end()) throw DataError("unknown discovery backend '" + name + "'");
    return it->second();
}

std::vector<std::string> backend_names() {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> out;
    for (const auto& [name, f] : r.factories) out.push_back(name);
    return out;
}

// ---------------------------------------------------------------------------

DiscoveryOutcome discover_cx(const Partition& partition, const DiscoveryConfig& config) {
    config.validate();
    DiscoveryOutcome outcome;
    outcome.graph = CXGraph(std::set<std::string>(partition.activity_set.begin(), partition.activity_set.end()));

    auto table = timestamp_table(partition, config.repeat_policy);
    outcome.traces = table.rows();
    if (!table.repeated.empty()) {
        outcome.warnings.push_back(std::to_string(table.repeated.size()) + " trace(s) repeat an activity (policy " +
                                   (config.repeat_policy == RepeatPolicy::first  ? "first"
                                    : config.repeat_policy == RepeatPolicy::last ? "last"
                                                                                 : "drop_trace") +
                                   ")");
    }
    if (table.rows() < config.min_traces || table.rows() == 0) {
        outcome.skipped = true;
        outcome.warnings.push_back("partition skipped: " + std::to_string(table.rows()) + " trace(s), fewer than " +
                                   std::to_string(config.min_traces));
        return outcome;
    }
    if (table.cols() < 2) return outcome;

    auto stats = precedence_stats(table);
    outcome.blacklist = build_blacklist(stats, config.theta);

    const std::size_t cols = table.cols();

    // Traces that order a blacklisted pair the rare way are the noise the
    // threshold tolerates; keep them out of the regression data.
    std::vector<std::size_t> kept_rows;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        bool violates = false;
        for (std::size_t i = 0; i < cols && !violates; ++i) {
            for (std::size_t j = 0; j < cols && !violates; ++j) {
                if (i != j && table.at(r, i) < table.at(r, j) &&
                    outcome.blacklist.count({table.activities[i], table.activities[j]}))
                    violates = true;
            }
        }
        if (!violates || !config.filter_violations) kept_rows.push_back(r);
    }
    if (kept_rows.size() < std::max<std::size_t>(config.min_traces, 2)) {
        outcome.warnings.push_back("precedence filtering would leave " + std::to_string(kept_rows.size()) +
                                   " trace(s); using all traces");
        kept_rows.resize(table.rows());
        for (std::size_t r = 0; r < table.rows(); ++r) kept_rows[r] = r;
    } else if (kept_rows.size() < table.rows()) {
        outcome.warnings.push_back(std::to_string(table.rows() - kept_rows.size()) +
                                   " trace(s) contradict the dominant precedence and were excluded from fitting");
    }

    const std::size_t rows = kept_rows.size();
    Millis origin = table.at(kept_rows.front(), 0);
    for (auto r : kept_rows)
        for (std::size_t c = 0; c < cols; ++c) origin = std::min(origin, table.at(r, c));
    std::vector<double> values(rows * cols);
    for (std::size_t k = 0; k < rows; ++k) {
        const std::size_t r = kept_rows[k];
        Millis anchor = origin;
        if (config.anchor == Anchor::first_event) {
            anchor = table.at(r, 0);
            for (std::size_t c = 1; c < cols; ++c) anchor = std::min(anchor, table.at(r, c));
        }
        for (std::size_t c = 0; c < cols; ++c)
            values[k * cols + c] = static_cast<double>(table.at(r, c) - anchor) / 1000.0;
    }

    // Zero-variance columns stay as isolated nodes.
    std::vector<std::size_t> live;
    for (std::size_t c = 0; c < cols; ++c) {
        double lo = values[c], hi = values[c];
        for (std::size_t r = 1; r < rows; ++r) {
            lo = std::min(lo, values[r * cols + c]);
            hi = std::max(hi, values[r * cols + c]);
        }
        if (hi > lo) {
            live.push_back(c);
        } else {
            outcome.warnings.push_back("activity '" + table.activities[c] +
                                       "' has zero variance; its edges are undetermined");
        }
    }
    if (live.size() < 2) return outcome;

    DiscoveryProblem problem;
    problem.rows = rows;
    problem.coeff_prune = config.coeff_prune;
    for (auto c : live) problem.activities.push_back(table.activities[c]);
    const std::size_t k = live.size();
    problem.data.resize(rows * k);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < k; ++c) problem.data[r * k + c] = values[r * cols + live[c]];
    }
    problem.forbidden.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j && outcome.blacklist.count({problem.activities[i], problem.activities[j]}))
                problem.forbidden[i * k + j] = 1;
        }
    }

    auto backend = make_backend(config.backend);
    CXGraph found = backend->discover(problem, outcome.warnings);
    for (const auto& [edge, coef] : found.edges()) {
        if (!outcome.graph.has_node(edge.first) || !outcome.graph.has_node(edge.second))
            throw InvariantError("backend '" + config.backend + "' produced an edge over unknown activities");
        if (outcome.blacklist.count(edge))
            throw InvariantError("backend '" + config.backend + "' produced blacklisted edge " + edge.first + " -> " +
                                 edge.second);
        outcome.graph.add_edge(edge.first, edge.second, coef);
    }
    if (!outcome.graph.is_acyclic()) throw InvariantError("backend '" + config.backend + "' produced a cycle");
    return outcome;
}

}  // namespace ucx
