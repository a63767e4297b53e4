#pragma once

// DirectLiNGAM-style estimation: causal ordering by pairwise likelihood-ratio
// exogeneity scores, then least-squares adjacency estimation.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ucx/discovery.hpp"

namespace ucx::lingam {

/// Maximum-entropy approximation of differential entropy for a standardized
/// sample.
double entropy(const Eigen::VectorXd& u);

/// Negentropy proxy; near zero for Gaussian samples.
double non_gaussianity(const Eigen::VectorXd& u);

/// Positive when `xi` looks like the cause of `xj`.
double pairwise_score(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj);

/// Column indices of `data` in estimated causal order. Constraints:
/// forbidden(i, j) means i may not cause j; an index is never placed ahead of
/// a remaining index it is forbidden to cause unless the reverse is also
/// forbidden.
std::vector<std::size_t> causal_order(const Eigen::MatrixXd& data, const std::vector<char>& forbidden,
                                      std::vector<std::string>* warnings = nullptr);

/// Ordinary least squares of each variable on its allowed predecessors in
/// `order`. Returns the coefficient matrix B where B(effect, cause) is the
/// standardized coefficient.
Eigen::MatrixXd estimate_adjacency(const Eigen::MatrixXd& data, const std::vector<std::size_t>& order,
                                   const std::vector<char>& forbidden, double prune);

class DirectLingamBackend final : public DiscoveryBackend {
  public:
    CXGraph discover(const DiscoveryProblem& problem, std::vector<std::string>& warnings) const override;
};

}  // namespace ucx::lingam
