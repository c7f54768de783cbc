#include "deepdoc/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace deepdoc {

int FeatureMatrix::row_of(int doc_id) const {
    for (size_t i = 0; i < doc_ids.size(); ++i) {
        if (doc_ids[i] == doc_id) return static_cast<int>(i);
    }
    throw FeatureError("doc id " + std::to_string(doc_id) + " not in feature matrix");
}

TfidfModel tfidf_fit(const Corpus& corpus, const std::vector<int>& train_ids,
                     const Vocabulary& vocabulary) {
    if (train_ids.empty()) throw FeatureError("tfidf_fit: empty training set");
    (void)corpus;
    TfidfModel model;
    model.vocabulary = vocabulary;
    const auto n = static_cast<double>(vocabulary.n_docs);
    model.idf.resize(vocabulary.size());
    for (int t = 0; t < vocabulary.size(); ++t) {
        model.idf[t] = std::log(n / static_cast<double>(vocabulary.doc_freq[t]));
    }
    return model;
}

DocVector tfidf_transform(const TfidfModel& model, const std::vector<std::string>& tokens) {
    DocVector v = DocVector::Zero(model.vocabulary.size());
    for (const auto& token : tokens) {
        int t = model.vocabulary.index_of(token);
        if (t >= 0) v[t] += model.idf[t];
    }
    double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

FeatureMatrix tfidf_matrix(const TfidfModel& model, const Corpus& corpus,
                           const std::vector<int>& doc_ids) {
    FeatureMatrix m;
    m.kind = "tfidf";
    m.doc_ids = doc_ids;
    m.rows.resize(static_cast<Eigen::Index>(doc_ids.size()), model.vocabulary.size());
    for (size_t i = 0; i < doc_ids.size(); ++i) {
        m.rows.row(static_cast<Eigen::Index>(i)) =
            tfidf_transform(model, corpus.doc(doc_ids[i]).tokens).transpose();
    }
    return m;
}

LsaModel lsa_fit(const TfidfModel& tfidf, const Eigen::MatrixXd& train_tfidf_rows, int d) {
    const Eigen::Index n = train_tfidf_rows.rows();
    const Eigen::Index v = train_tfidf_rows.cols();
    if (d < 1) throw FeatureError("lsa_fit: D must be >= 1");
    if (d > std::min(n, v)) throw FeatureError("lsa_fit: D exceeds matrix dimensions");

    // Thin SVD through the smaller Gram matrix; right singular vectors are
    // recovered as A^T u / sigma when working with A A^T.
    Eigen::MatrixXd right;       // v x r right singular vectors
    Eigen::VectorXd singular;    // descending
    if (v <= n) {
        Eigen::MatrixXd gram = train_tfidf_rows.transpose() * train_tfidf_rows;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        right = eig.eigenvectors().rowwise().reverse();
        singular = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
    } else {
        Eigen::MatrixXd gram = train_tfidf_rows * train_tfidf_rows.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
        singular = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
        right.resize(v, singular.size());
        for (Eigen::Index k = 0; k < singular.size(); ++k) {
            if (singular[k] > 0.0) {
                right.col(k) = train_tfidf_rows.transpose() * u.col(k) / singular[k];
            } else {
                right.col(k).setZero();
            }
        }
    }

    // Numerical rank; shrink D when the requested count exceeds it.
    const double tol = singular.size() > 0 ? singular[0] * 1e-10 : 0.0;
    int rank = 0;
    for (Eigen::Index k = 0; k < singular.size(); ++k) {
        if (singular[k] > tol) ++rank;
    }
    if (d > rank) {
        std::cerr << "lsa_fit: requested D=" << d << " exceeds matrix rank " << rank
                  << ", shrinking\n";
        d = std::max(rank, 1);
    }

    LsaModel model;
    model.tfidf = tfidf;
    model.projection = right.leftCols(d);
    model.singular_values = singular.head(d);
    return model;
}

DocVector lsa_transform(const LsaModel& model, const DocVector& tfidf_row) {
    if (tfidf_row.size() != model.projection.rows()) {
        throw FeatureError("lsa_transform: tfidf row length mismatch");
    }
    return model.projection.transpose() * tfidf_row;
}

FeatureMatrix lsa_matrix(const LsaModel& model, const Corpus& corpus,
                         const std::vector<int>& doc_ids) {
    FeatureMatrix m;
    m.kind = "lsa";
    m.doc_ids = doc_ids;
    m.rows.resize(static_cast<Eigen::Index>(doc_ids.size()), model.projection.cols());
    for (size_t i = 0; i < doc_ids.size(); ++i) {
        DocVector row = tfidf_transform(model.tfidf, corpus.doc(doc_ids[i]).tokens);
        m.rows.row(static_cast<Eigen::Index>(i)) = lsa_transform(model, row).transpose();
    }
    return m;
}

EmbeddingTable load_word_vectors(const std::string& path, int expected_dim) {
    std::ifstream in(path);
    if (!in) throw FeatureError("cannot open word-vector file: " + path);

    EmbeddingTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream iss(line);
        std::string word;
        iss >> word;
        std::vector<double> values;
        std::string field;
        while (iss >> field) {
            size_t pos = 0;
            double x;
            try {
                x = std::stod(field, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != field.size()) {
                throw FeatureError("unparsable number '" + field + "' at line " +
                                   std::to_string(line_no) + " of " + path);
            }
            values.push_back(x);
        }
        if (values.empty()) {
            throw FeatureError("no vector values at line " + std::to_string(line_no) +
                               " of " + path);
        }
        if (table.dim == 0) {
            table.dim = static_cast<int>(values.size());
            if (expected_dim > 0 && table.dim != expected_dim) {
                throw FeatureError("word-vector file " + path + " has dimension " +
                                   std::to_string(table.dim) + ", expected " +
                                   std::to_string(expected_dim));
            }
        } else if (static_cast<int>(values.size()) != table.dim) {
            throw FeatureError("inconsistent vector dimension at line " +
                               std::to_string(line_no) + " of " + path);
        }
        table.vectors[word] = Eigen::Map<Eigen::VectorXd>(values.data(),
                                                          static_cast<Eigen::Index>(values.size()));
    }
    if (table.vectors.empty()) throw FeatureError("empty word-vector file: " + path);
    return table;
}

DocVector average_embedding(const std::vector<std::string>& tokens,
                            const EmbeddingTable& table,
                            const std::set<std::string>& stopwords) {
    DocVector sum = DocVector::Zero(table.dim);
    long n = 0;
    for (const auto& token : tokens) {
        if (stopwords.count(token)) continue;
        auto it = table.vectors.find(token);
        if (it == table.vectors.end()) continue;
        sum += it->second;
        ++n;
    }
    if (n > 0) sum /= static_cast<double>(n);
    return sum;
}

FeatureMatrix average_matrix(const EmbeddingTable& table, const Corpus& corpus,
                             const std::vector<int>& doc_ids,
                             const std::set<std::string>& stopwords) {
    FeatureMatrix m;
    m.kind = "avg";
    m.doc_ids = doc_ids;
    m.rows.resize(static_cast<Eigen::Index>(doc_ids.size()), table.dim);
    for (size_t i = 0; i < doc_ids.size(); ++i) {
        m.rows.row(static_cast<Eigen::Index>(i)) =
            average_embedding(corpus.doc(doc_ids[i]).tokens, table, stopwords).transpose();
    }
    return m;
}

}  // namespace deepdoc
