#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepdoc/features.hpp"

namespace deepdoc {

struct ClassifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LabeledDataset {
    Eigen::MatrixXd x;            // row per example
    std::vector<std::string> y;   // label per row
    std::vector<std::string> label_set;  // sorted unique labels
};

LabeledDataset make_dataset(const FeatureMatrix& features, const Corpus& corpus);

struct EvalReport {
    std::vector<std::string> labels;
    std::vector<double> precision, recall, f1;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    Eigen::MatrixXi confusion;  // rows gold, cols predicted
};

EvalReport f1_report(const std::vector<std::string>& pred,
                     const std::vector<std::string>& gold,
                     const std::vector<std::string>& label_set);

// ---- KNN (cosine similarity) -------------------------------------------

// Majority label among the top-k training rows by cosine similarity.
// Zero-vector similarity is 0. Ties: summed similarity, then lexicographic.
std::string knn_predict(const LabeledDataset& train, const DocVector& query, int k);

// ---- Linear SVM, one-vs-rest hinge-loss SGD -----------------------------

struct SvmModel {
    std::vector<std::string> labels;
    Eigen::MatrixXd w;  // one row per label
    Eigen::VectorXd b;
};

SvmModel svm_train(const LabeledDataset& train, int epochs, double reg,
                   std::uint64_t seed, double lr = 0.01, bool use_biases = true);
std::string svm_predict(const SvmModel& model, const DocVector& x);

// ---- Decision tree (Gini impurity) ---------------------------------------

struct TreeNode {
    int feature = -1;        // -1 for leaves
    double threshold = 0.0;  // go left when x[feature] <= threshold
    std::string label;       // leaves only
    std::unique_ptr<TreeNode> left, right;
};

struct DTreeModel {
    std::unique_ptr<TreeNode> root;
};

DTreeModel dtree_train(const LabeledDataset& train, int max_depth, int min_leaf,
                       std::uint64_t seed);
std::string dtree_predict(const DTreeModel& model, const DocVector& x);

// ---- Random forest --------------------------------------------------------

struct RForestModel {
    std::vector<DTreeModel> trees;
};

// feature_frac <= 0 means the sqrt(D) default; bootstrap=false trains every
// tree on the full dataset.
RForestModel rforest_train(const LabeledDataset& train, int n_trees,
                           double feature_frac, std::uint64_t seed,
                           int max_depth = 32, int min_leaf = 1,
                           bool bootstrap = true);
std::string rforest_predict(const RForestModel& model, const DocVector& x);

// ---- MLP (one hidden LReLU layer + softmax, cross-entropy SGD) ------------

struct MlpModel {
    std::vector<std::string> labels;
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
    double epsilon = 0.1;
};

MlpModel mlp_train(const LabeledDataset& train, int hidden, int epochs, double lr,
                   std::uint64_t seed);
std::string mlp_predict(const MlpModel& model, const DocVector& x);
Eigen::VectorXd mlp_probabilities(const MlpModel& model, const DocVector& x);

}  // namespace deepdoc
