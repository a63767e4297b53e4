#include "ucx/direct_lingam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ucx::lingam {

namespace {

constexpr double kK1 = 79.047;
constexpr double kK2 = 7.4129;
constexpr double kGamma = 0.37457;
constexpr double kTiny = 1e-12;
const double kGaussEntropy = (1.0 + std::log(2.0 * std::numbers::pi)) / 2.0;

double log_cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

Eigen::VectorXd standardize(const Eigen::VectorXd& x) {
    const double n = static_cast<double>(x.size());
    Eigen::VectorXd c = x.array() - x.mean();
    double sd = std::sqrt(c.squaredNorm() / n);
    if (sd < kTiny) return Eigen::VectorXd::Zero(x.size());
    return c / sd;
}

/// x - (cov(x, y) / var(y)) * y
Eigen::VectorXd residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    Eigen::VectorXd yc = y.array() - y.mean();
    double var = yc.squaredNorm();
    if (var < kTiny) return x;
    Eigen::VectorXd xc = x.array() - x.mean();
    return x - (xc.dot(yc) / var) * y;
}

}  // namespace

double entropy(const Eigen::VectorXd& u) {
    const double n = static_cast<double>(u.size());
    double m1 = 0.0, m2 = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        m1 += log_cosh(u[i]);
        m2 += u[i] * std::exp(-u[i] * u[i] / 2.0);
    }
    m1 /= n;
    m2 /= n;
    return kGaussEntropy - kK1 * (m1 - kGamma) * (m1 - kGamma) - kK2 * m2 * m2;
}

double non_gaussianity(const Eigen::VectorXd& u) { return kGaussEntropy - entropy(standardize(u)); }

double pairwise_score(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj) {
    Eigen::VectorXd si = standardize(xi), sj = standardize(xj);
    Eigen::VectorXd ri_j = standardize(residual(si, sj));
    Eigen::VectorXd rj_i = standardize(residual(sj, si));
    return (entropy(sj) + entropy(ri_j)) - (entropy(si) + entropy(rj_i));
}

std::vector<std::size_t> causal_order(const Eigen::MatrixXd& data, const std::vector<char>& forbidden,
                                      std::vector<std::string>* warnings) {
    const std::size_t k = static_cast<std::size_t>(data.cols());
    auto is_forbidden = [&](std::size_t a, std::size_t b) { return forbidden[a * k + b] != 0; };

    std::vector<Eigen::VectorXd> work;
    work.reserve(k);
    for (std::size_t c = 0; c < k; ++c) work.push_back(data.col(static_cast<Eigen::Index>(c)));

    std::vector<std::size_t> remaining(k);
    for (std::size_t i = 0; i < k; ++i) remaining[i] = i;
    std::vector<std::size_t> order;
    bool conflict_reported = false;

    std::vector<double> score_matrix(k * k, 0.0);
    while (!remaining.empty()) {
        if (remaining.size() == 1) {
            order.push_back(remaining.front());
            break;
        }
        // A candidate may not precede an activity it is forbidden to cause
        // while that activity is allowed to cause it.
        std::vector<std::size_t> candidates;
        for (auto i : remaining) {
            bool ok = true;
            for (auto j : remaining) {
                if (i != j && is_forbidden(i, j) && !is_forbidden(j, i)) {
                    ok = false;
                    break;
                }
            }
            if (ok) candidates.push_back(i);
        }
        if (candidates.empty()) {
            candidates = remaining;
            if (warnings && !conflict_reported) {
                warnings->push_back("precedence constraints are cyclic; ordering falls back to data only");
                conflict_reported = true;
            }
        }

        std::size_t root = candidates.front();
        if (candidates.size() > 1) {
            std::vector<Eigen::VectorXd> stdz(k);
            std::vector<double> h(k, 0.0);
            for (auto i : remaining) {
                stdz[i] = standardize(work[i]);
                h[i] = entropy(stdz[i]);
            }
            // score(i, j) = -score(j, i): one residual pair per unordered pair.
            for (std::size_t a = 0; a < remaining.size(); ++a) {
                for (std::size_t b = a + 1; b < remaining.size(); ++b) {
                    auto i = remaining[a], j = remaining[b];
                    Eigen::VectorXd ri_j = standardize(residual(stdz[i], stdz[j]));
                    Eigen::VectorXd rj_i = standardize(residual(stdz[j], stdz[i]));
                    double d = (h[j] + entropy(ri_j)) - (h[i] + entropy(rj_i));
                    score_matrix[i * k + j] = d;
                    score_matrix[j * k + i] = -d;
                }
            }
            double best = -std::numeric_limits<double>::infinity();
            for (auto i : candidates) {
                double m = 0.0;
                for (auto j : remaining) {
                    if (i == j) continue;
                    double d = std::min(0.0, score_matrix[i * k + j]);
                    m += d * d;
                }
                if (-m > best) {
                    best = -m;
                    root = i;
                }
            }
        }

        order.push_back(root);
        remaining.erase(std::find(remaining.begin(), remaining.end(), root));
        for (auto i : remaining) work[i] = residual(work[i], work[root]);
    }
    return order;
}

Eigen::MatrixXd estimate_adjacency(const Eigen::MatrixXd& data, const std::vector<std::size_t>& order,
                                   const std::vector<char>& forbidden, double prune) {
    const auto k = static_cast<std::size_t>(data.cols());
    Eigen::MatrixXd std_data(data.rows(), data.cols());
    for (Eigen::Index c = 0; c < data.cols(); ++c) std_data.col(c) = standardize(data.col(c));

    auto regress = [&](std::size_t target, const std::vector<std::size_t>& regressors) {
        Eigen::MatrixXd x(std_data.rows(), static_cast<Eigen::Index>(regressors.size()));
        for (std::size_t r = 0; r < regressors.size(); ++r)
            x.col(static_cast<Eigen::Index>(r)) = std_data.col(static_cast<Eigen::Index>(regressors[r]));
        Eigen::VectorXd beta = x.colPivHouseholderQr().solve(std_data.col(static_cast<Eigen::Index>(target)));
        return beta;
    };

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t pos = 1; pos < order.size(); ++pos) {
        auto target = order[pos];
        std::vector<std::size_t> regressors;
        for (std::size_t p = 0; p < pos; ++p) {
            if (!forbidden[order[p] * k + target]) regressors.push_back(order[p]);
        }
        if (regressors.empty()) continue;
        Eigen::VectorXd beta = regress(target, regressors);
        std::vector<std::size_t> kept;
        for (std::size_t r = 0; r < regressors.size(); ++r) {
            if (std::isfinite(beta[static_cast<Eigen::Index>(r)]) &&
                std::abs(beta[static_cast<Eigen::Index>(r)]) >= prune)
                kept.push_back(regressors[r]);
        }
        if (kept.empty()) continue;
        // Refit on the surviving parents for the reported coefficients.
        Eigen::VectorXd refit = regress(target, kept);
        for (std::size_t r = 0; r < kept.size(); ++r)
            b(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(kept[r])) = refit[static_cast<Eigen::Index>(r)];
    }
    return b;
}

CXGraph DirectLingamBackend::discover(const DiscoveryProblem& problem, std::vector<std::string>& warnings) const {
    const std::size_t k = problem.activities.size();
    CXGraph g(std::set<std::string>(problem.activities.begin(), problem.activities.end()));
    if (k < 2 || problem.rows < 2) return g;

    Eigen::MatrixXd data(static_cast<Eigen::Index>(problem.rows), static_cast<Eigen::Index>(k));
    for (std::size_t r = 0; r < problem.rows; ++r) {
        for (std::size_t c = 0; c < k; ++c)
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = problem.data[r * k + c];
    }

    auto order = causal_order(data, problem.forbidden, &warnings);
    Eigen::MatrixXd b = estimate_adjacency(data, order, problem.forbidden, problem.coeff_prune);

    std::vector<std::string> gaussian_like;
    for (std::size_t t = 0; t < k; ++t) {
        Eigen::VectorXd resid = standardize(data.col(static_cast<Eigen::Index>(t)));
        for (std::size_t c = 0; c < k; ++c) {
            double w = b(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c));
            if (w == 0.0) continue;
            resid -= w * standardize(data.col(static_cast<Eigen::Index>(c)));
            g.add_edge(problem.activities[c], problem.activities[t], w);
        }
        if (non_gaussianity(resid) < 1e-4) gaussian_like.push_back(problem.activities[t]);
    }
    if (!gaussian_like.empty()) {
        std::string names;
        for (const auto& n : gaussian_like) names += (names.empty() ? "" : ", ") + n;
        warnings.push_back("near-Gaussian disturbances for " + names + "; causal direction is weakly identified");
    }
    return g;
}

}  // namespace ucx::lingam
