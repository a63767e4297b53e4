#pragma once

// Scaling benchmark: per-partition discovery timings and least-squares
// polynomial fits of time against activity count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucx/discovery.hpp"
#include "ucx/event_log.hpp"

namespace ucx {

struct PolyFit {
    int degree = 0;
    std::vector<double> coefficients;  // ascending powers
    double r2 = 0.0;

    double operator()(double x) const;
};

/// Least-squares fit; throws DataError when there are fewer points than
/// coefficients.
PolyFit fit_polynomial(const std::vector<double>& x, const std::vector<double>& y, int degree);

double median(std::vector<double> values);

struct BenchRow {
    std::string partition;  // '|'-joined activity set
    std::size_t activities = 0;
    std::size_t traces = 0;
    double median_seconds = 0.0;
    std::vector<double> samples;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::optional<PolyFit> cubic;
    std::optional<PolyFit> linear;
    std::string notice;  // why the fits were skipped, if they were
};

/// Times discover_cx on every partition `repetitions` times (median kept) and
/// fits cubic and linear models when at least 4 distinct activity counts exist.
BenchReport bench_partitions(const std::vector<Partition>& partitions, const DiscoveryConfig& config,
                             std::size_t repetitions = 3);

/// One synthetic single-partition workload per activity count.
std::vector<Partition> synthetic_bench_partitions(const std::vector<std::size_t>& activity_counts, std::size_t traces,
                                                  std::uint64_t seed);

/// Rows as CSV, followed by "# fit" comment lines.
std::string bench_csv(const BenchReport& report);

}  // namespace ucx
