#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepdoc/corpus.hpp"

namespace deepdoc {

using DocVector = Eigen::VectorXd;

// Dense row-per-document representation. The row order follows doc_ids.
struct FeatureMatrix {
    Eigen::MatrixXd rows;      // n_docs x dim
    std::vector<int> doc_ids;  // row i holds doc_ids[i]
    std::string kind;          // tfidf | lsa | lda | avg | deep
    std::uint64_t split_seed = 0;

    int dim() const { return static_cast<int>(rows.cols()); }
    int n() const { return static_cast<int>(rows.rows()); }
    int row_of(int doc_id) const;
};

struct FeatureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- TFIDF -----------------------------------------------------------

// Raw term count x ln(N/df), L2-normalized rows.
struct TfidfModel {
    Vocabulary vocabulary;
    Eigen::VectorXd idf;  // per term index
};

TfidfModel tfidf_fit(const Corpus& corpus, const std::vector<int>& train_ids,
                     const Vocabulary& vocabulary);
DocVector tfidf_transform(const TfidfModel& model, const std::vector<std::string>& tokens);
FeatureMatrix tfidf_matrix(const TfidfModel& model, const Corpus& corpus,
                           const std::vector<int>& doc_ids);

// ---- LSA -------------------------------------------------------------

// Truncated SVD of the training document-term TFIDF matrix. projection maps
// a V-dim TFIDF row to its D-dim concept coordinates.
struct LsaModel {
    TfidfModel tfidf;
    Eigen::MatrixXd projection;      // V x D, orthonormal columns
    Eigen::VectorXd singular_values; // length D, non-increasing
};

// May shrink D to the numerical rank of the matrix (warns on stderr).
LsaModel lsa_fit(const TfidfModel& tfidf, const Eigen::MatrixXd& train_tfidf_rows, int d);
DocVector lsa_transform(const LsaModel& model, const DocVector& tfidf_row);
FeatureMatrix lsa_matrix(const LsaModel& model, const Corpus& corpus,
                         const std::vector<int>& doc_ids);

// ---- Pretrained word vectors, mean-of-words document embedding --------

struct EmbeddingTable {
    std::map<std::string, Eigen::VectorXd> vectors;
    int dim = 0;
};

// Parses a GloVe-format text file: `word v1 v2 ... vd` per line.
EmbeddingTable load_word_vectors(const std::string& path, int expected_dim = -1);

// Mean of the vectors of in-vocabulary, non-stop-word tokens; zero vector
// when nothing contributes.
DocVector average_embedding(const std::vector<std::string>& tokens,
                            const EmbeddingTable& table,
                            const std::set<std::string>& stopwords);
FeatureMatrix average_matrix(const EmbeddingTable& table, const Corpus& corpus,
                             const std::vector<int>& doc_ids,
                             const std::set<std::string>& stopwords);

}  // namespace deepdoc
