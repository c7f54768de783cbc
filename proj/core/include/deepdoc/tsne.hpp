#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace deepdoc {

struct TsneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TsneConfig {
    double perplexity = 30.0;
    int iters = 1000;
    double learning_rate = 200.0;
    double momentum_early = 0.5;
    double momentum_late = 0.8;
    int momentum_switch_iter = 250;
    double exaggeration_factor = 12.0;
    int exaggeration_iters = 250;
    std::uint64_t seed = 0;
};

struct TsneResult {
    Eigen::MatrixXd coords;  // n x 2
    double initial_kl = 0.0;
    double final_kl = 0.0;
    std::vector<double> kl_trace;  // KL per iteration (post-exaggeration values)
};

// Exact O(n^2) t-SNE. Gaussian bandwidths solved by bisection to match the
// perplexity within 1e-5; symmetrized joint P; Student-t Q; gradient descent
// on KL with momentum and early exaggeration.
TsneResult tsne(const Eigen::MatrixXd& x, const TsneConfig& config);

// Input-space affinities before gradient descent (exposed for testing).
Eigen::MatrixXd tsne_joint_probabilities(const Eigen::MatrixXd& x, double perplexity);

// Writes `doc_id,x,y,label` CSV and an SVG scatter with one fixed color per
// class (lexicographic label order) and a legend.
void export_scatter(const Eigen::MatrixXd& coords, const std::vector<int>& doc_ids,
                    const std::vector<std::string>& labels,
                    const std::string& csv_path, const std::string& svg_path);

}  // namespace deepdoc
