#include "ucx/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "ucx/errors.hpp"
#include "ucx/verify.hpp"

namespace ucx {

double PolyFit::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyFit fit_polynomial(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (degree < 0) throw DataError("polynomial degree must be >= 0");
    if (x.size() != y.size()) throw DataError("fit needs as many x as y values");
    const auto n = static_cast<Eigen::Index>(x.size());
    const auto p = static_cast<Eigen::Index>(degree + 1);
    if (n < p) throw DataError("fit of degree " + std::to_string(degree) + " needs at least " +
                               std::to_string(degree + 1) + " points");
    Eigen::MatrixXd a(n, p);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = 1.0;
        for (Eigen::Index j = 0; j < p; ++j, v *= x[static_cast<std::size_t>(i)]) a(i, j) = v;
        b[i] = y[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    PolyFit fit;
    fit.degree = degree;
    fit.coefficients.assign(c.data(), c.data() + c.size());
    double mean = b.mean();
    double ss_tot = (b.array() - mean).square().sum();
    double ss_res = (a * c - b).squaredNorm();
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double median(std::vector<double> values) {
    if (values.empty()) throw DataError("median of an empty sample");
    std::sort(values.begin(), values.end());
    auto n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

BenchReport bench_partitions(const std::vector<Partition>& partitions, const DiscoveryConfig& config,
                             std::size_t repetitions) {
    if (repetitions == 0) throw DataError("repetitions must be >= 1");
    BenchReport report;
    for (const auto& p : partitions) {
        BenchRow row;
        for (std::size_t i = 0; i < p.activity_set.size(); ++i)
            row.partition += (i ? "|" : "") + p.activity_set[i];
        row.activities = p.activity_set.size();
        row.traces = p.traces.size();
        for (std::size_t r = 0; r < repetitions; ++r) {
            auto start = std::chrono::steady_clock::now();
            auto outcome = discover_cx(p, config);
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            row.samples.push_back(elapsed.count());
        }
        row.median_seconds = median(row.samples);
        report.rows.push_back(std::move(row));
    }

    std::set<std::size_t> distinct;
    for (const auto& r : report.rows) distinct.insert(r.activities);
    if (distinct.size() < 4) {
        report.notice = "fit skipped: " + std::to_string(distinct.size()) +
                        " distinct activity count(s), at least 4 are needed";
        return report;
    }
    std::vector<double> x, y;
    for (const auto& r : report.rows) {
        x.push_back(static_cast<double>(r.activities));
        y.push_back(r.median_seconds);
    }
    report.cubic = fit_polynomial(x, y, 3);
    report.linear = fit_polynomial(x, y, 1);
    return report;
}

std::vector<Partition> synthetic_bench_partitions(const std::vector<std::size_t>& activity_counts, std::size_t traces,
                                                  std::uint64_t seed) {
    std::vector<Partition> out;
    for (std::size_t i = 0; i < activity_counts.size(); ++i) {
        auto spec = random_synthetic_spec(activity_counts[i], 0.3, seed + i);
        spec.traces = traces;
        auto parts = partition(gen_synthetic_log(spec));
        if (parts.size() != 1) throw InvariantError("synthetic workload split into several partitions");
        out.push_back(std::move(parts.front()));
    }
    return out;
}

std::string bench_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "partition,activities,traces,median_seconds,repetitions\n";
    char buf[64];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.median_seconds);
        out << '"' << r.partition << "\"," << r.activities << ',' << r.traces << ',' << buf << ',' << r.samples.size()
            << '\n';
    }
    auto emit = [&](const char* name, const std::optional<PolyFit>& fit) {
        if (!fit) return;
        out << "# " << name << " fit r2=";
        std::snprintf(buf, sizeof buf, "%.6f", fit->r2);
        out << buf << " coefficients=";
        for (std::size_t i = 0; i < fit->coefficients.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6g", fit->coefficients[i]);
            out << (i ? ";" : "") << buf;
        }
        out << '\n';
    };
    emit("cubic", report.cubic);
    emit("linear", report.linear);
    if (!report.notice.empty()) out << "# " << report.notice << '\n';
    return out.str();
}

}  // namespace ucx
