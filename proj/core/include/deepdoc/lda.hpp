#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "deepdoc/corpus.hpp"
#include "deepdoc/features.hpp"

namespace deepdoc {

// Topic model fitted by collapsed Gibbs sampling. phi rows are topic-word
// distributions estimated from the final counts with beta smoothing.
struct LdaModel {
    int n_topics = 0;
    double alpha = 0.0;
    double beta = 0.0;
    Eigen::MatrixXd phi;  // n_topics x V, rows on the simplex
    Vocabulary vocabulary;
};

// Defaults when the caller gives no hyperparameters: alpha = 50/D, beta = 0.01.
LdaModel lda_fit(const Corpus& corpus, const std::vector<int>& train_ids,
                 const Vocabulary& vocabulary, int n_topics, double alpha,
                 double beta, int iters, std::uint64_t seed);

// Per-document topic proportions via fold-in Gibbs with phi held fixed.
// All-OOV or empty documents get the uniform vector.
DocVector lda_transform(const LdaModel& model, const std::vector<std::string>& tokens,
                        int fold_in_iters, std::uint64_t seed);

FeatureMatrix lda_matrix(const LdaModel& model, const Corpus& corpus,
                         const std::vector<int>& doc_ids, int fold_in_iters,
                         std::uint64_t seed);

}  // namespace deepdoc
