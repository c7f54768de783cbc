#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepdoc/features.hpp"
#include "deepdoc/pairs.hpp"

namespace deepdoc {

struct SiameseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Weights of the pair-relevancy network. Both sub-networks evaluate through
// the single w1/b1 storage, so weight sharing is exact by construction.
struct SiameseParams {
    Eigen::MatrixXd w1;   // H x D shared transformation
    Eigen::VectorXd b1;   // H
    Eigen::MatrixXd w21;  // C x 2H combination layer
    Eigen::VectorXd b21;  // C
    Eigen::RowVectorXd w22;  // 1 x C output layer
    double b22 = 0.0;

    int input_dim() const { return static_cast<int>(w1.cols()); }
    int hidden_dim() const { return static_cast<int>(w1.rows()); }
    int combo_dim() const { return static_cast<int>(w21.rows()); }
};

struct TrainConfig {
    double lr0 = 0.0005;       // initial learning rate
    double s = 100.0;          // decay horizon in iterations
    double epsilon = 0.1;      // LReLU slope
    double dropout_p = 0.5;
    double init_range = 0.01;
    bool use_biases = true;
    long max_iters = 400000;
    long eval_every = 1000;
    int patience = 5;
    std::uint64_t seed = 0;
};

struct TrainTrace {
    struct Record {
        long iteration;
        double train_mse;       // running MSE since the previous evaluation
        double validation_mse;
        double learning_rate;
    };
    std::vector<Record> records;
    std::string stopping_reason;  // "patience" | "max_iters"
    long best_iteration = 0;
    double best_validation_mse = 0.0;
};

double lrelu(double x, double epsilon);
double lrelu_grad(double x, double epsilon);  // slope epsilon at x == 0
double lrate(long iteration, const TrainConfig& config);

// Weights i.i.d. uniform on [-init_range, init_range], biases zero.
SiameseParams init_params(int input_dim, int hidden_dim, int combo_dim,
                          const TrainConfig& config);

// Hidden representation of one branch: lrelu(W1 x + b1), with optional
// inverted-dropout mask (training only).
Eigen::VectorXd subnet_forward(const SiameseParams& params, const DocVector& x,
                               double epsilon,
                               const Eigen::VectorXd* dropout_mask = nullptr,
                               double dropout_p = 0.0);

struct ForwardResult {
    Eigen::VectorXd ha, hb;  // branch embeddings (post dropout when masked)
    double score = 0.0;      // tanh output in (-1, 1)
};

struct DropoutMasks {
    Eigen::VectorXd a;  // 0/1 per hidden unit
    Eigen::VectorXd b;
};

ForwardResult forward(const SiameseParams& params, const DocVector& xa,
                      const DocVector& xb, double epsilon,
                      const DropoutMasks* masks = nullptr, double dropout_p = 0.0);

double mse_loss(const std::vector<double>& scores, const std::vector<double>& targets);

// Gradients of the per-pair squared error. w1_branch_a/w1_branch_b are the
// exact backpropagated gradients through each branch; w1/b1 hold their
// entrywise average, which is the applied shared-weight update.
struct Gradients {
    Eigen::MatrixXd w1_branch_a, w1_branch_b;
    Eigen::VectorXd b1_branch_a, b1_branch_b;
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w21;
    Eigen::VectorXd b21;
    Eigen::RowVectorXd w22;
    double b22 = 0.0;
};

Gradients backward(const SiameseParams& params, const DocVector& xa,
                   const DocVector& xb, double target, double epsilon,
                   const DropoutMasks* masks = nullptr, double dropout_p = 0.0);

// Per-pair SGD with Eq.-style learning-rate decay, fresh dropout masks per
// branch per iteration, periodic validation, and best-snapshot early stop.
std::pair<SiameseParams, TrainTrace> train(const PairSet& pair_set,
                                           const FeatureMatrix& features,
                                           const PairSet& val_pairs,
                                           const TrainConfig& config,
                                           int hidden_dim, int combo_dim);

// Deep document representations: row-wise subnet_forward, no dropout.
FeatureMatrix embed(const SiameseParams& params, const FeatureMatrix& features,
                    double epsilon = 0.1);

}  // namespace deepdoc
