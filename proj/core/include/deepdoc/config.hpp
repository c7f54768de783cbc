#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepdoc/siamese.hpp"
#include "deepdoc/tsne.hpp"

namespace deepdoc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full pipeline settings, loaded from an INI-style `key = value` file with
// `[section]` headers. Flat key form is `section.key`.
struct PipelineConfig {
    // [corpus]
    std::string corpus_root;
    double train_frac = 0.8104;
    double test_frac = 0.0993;
    double validation_frac = 0.0903;
    std::uint64_t split_seed = 7;

    // [features]
    std::vector<std::string> kinds = {"tfidf"};  // tfidf | lsa | lda | avg
    int dim = 200;
    std::string word_vectors_path;
    int lda_iters = 1000;
    int lda_fold_in_iters = 100;
    double lda_alpha = 0.0;  // <= 0: 50/D default
    double lda_beta = 0.01;
    std::uint64_t feature_seed = 7;

    // [pairs]
    long train_pairs = 200000;
    long test_pairs = 800;
    long validation_pairs = 200;
    double balance = 0.5;
    std::uint64_t pair_seed = 7;

    // [train]
    TrainConfig train;
    int hidden_dim = 0;  // 0: defaults to the input dim
    int combo_dim = 0;   // 0: defaults to hidden_dim

    // [evaluate]
    std::vector<int> knn_k = {1, 5, 10, 15, 20};
    int svm_epochs = 30;
    double svm_reg = 0.0001;
    int dtree_max_depth = 32;
    int rf_trees = 100;
    int mlp_hidden = 100;
    int mlp_epochs = 30;
    double mlp_lr = 0.01;
    std::uint64_t eval_seed = 7;

    // [tsne]
    TsneConfig tsne;

    // [output]
    std::string output_dir = "out";
};

PipelineConfig load_config(const std::string& path);

// Applies `section.key=value` overrides (CLI flags win over the file).
void apply_override(PipelineConfig& config, const std::string& key,
                    const std::string& value);

}  // namespace deepdoc
