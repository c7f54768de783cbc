#include "deepdoc/lda.hpp"

#include <random>

namespace deepdoc {

namespace {

// Draws from an unnormalized discrete distribution.
int sample_discrete(const std::vector<double>& weights, std::mt19937_64& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    std::uniform_real_distribution<double> unif(0.0, total);
    double r = unif(rng);
    for (size_t k = 0; k < weights.size(); ++k) {
        r -= weights[k];
        if (r <= 0.0) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
}

std::vector<int> to_term_ids(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& token : tokens) {
        int t = vocab.index_of(token);
        if (t >= 0) ids.push_back(t);
    }
    return ids;
}

}  // namespace

LdaModel lda_fit(const Corpus& corpus, const std::vector<int>& train_ids,
                 const Vocabulary& vocabulary, int n_topics, double alpha,
                 double beta, int iters, std::uint64_t seed) {
    if (n_topics < 1) throw FeatureError("lda_fit: n_topics must be >= 1");
    if (iters < 1) throw FeatureError("lda_fit: iters must be >= 1");
    if (train_ids.empty()) throw FeatureError("lda_fit: empty corpus");
    if (alpha <= 0.0) alpha = 50.0 / n_topics;
    if (beta <= 0.0) beta = 0.01;

    const int v = vocabulary.size();
    std::vector<std::vector<int>> docs;
    docs.reserve(train_ids.size());
    for (int id : train_ids) docs.push_back(to_term_ids(corpus.doc(id).tokens, vocabulary));

    const int n_docs = static_cast<int>(docs.size());
    Eigen::MatrixXi doc_topic = Eigen::MatrixXi::Zero(n_docs, n_topics);
    Eigen::MatrixXi topic_word = Eigen::MatrixXi::Zero(n_topics, v);
    Eigen::VectorXi topic_total = Eigen::VectorXi::Zero(n_topics);
    std::vector<std::vector<int>> assignment(docs.size());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> topic_unif(0, n_topics - 1);
    for (int d = 0; d < n_docs; ++d) {
        assignment[d].resize(docs[d].size());
        for (size_t j = 0; j < docs[d].size(); ++j) {
            int k = topic_unif(rng);
            assignment[d][j] = k;
            ++doc_topic(d, k);
            ++topic_word(k, docs[d][j]);
            ++topic_total[k];
        }
    }

    std::vector<double> weights(static_cast<size_t>(n_topics));
    for (int sweep = 0; sweep < iters; ++sweep) {
        for (int d = 0; d < n_docs; ++d) {
            for (size_t j = 0; j < docs[d].size(); ++j) {
                const int w = docs[d][j];
                const int old_k = assignment[d][j];
                --doc_topic(d, old_k);
                --topic_word(old_k, w);
                --topic_total[old_k];

                for (int k = 0; k < n_topics; ++k) {
                    weights[static_cast<size_t>(k)] =
                        (doc_topic(d, k) + alpha) *
                        (topic_word(k, w) + beta) / (topic_total[k] + beta * v);
                }
                const int new_k = sample_discrete(weights, rng);
                assignment[d][j] = new_k;
                ++doc_topic(d, new_k);
                ++topic_word(new_k, w);
                ++topic_total[new_k];
            }
        }
    }

    LdaModel model;
    model.n_topics = n_topics;
    model.alpha = alpha;
    model.beta = beta;
    model.vocabulary = vocabulary;
    model.phi.resize(n_topics, v);
    for (int k = 0; k < n_topics; ++k) {
        for (int w = 0; w < v; ++w) {
            model.phi(k, w) = (topic_word(k, w) + beta) / (topic_total[k] + beta * v);
        }
        model.phi.row(k) /= model.phi.row(k).sum();
    }
    return model;
}

DocVector lda_transform(const LdaModel& model, const std::vector<std::string>& tokens,
                        int fold_in_iters, std::uint64_t seed) {
    const int n_topics = model.n_topics;
    std::vector<int> ids = to_term_ids(tokens, model.vocabulary);
    if (ids.empty()) {
        return DocVector::Constant(n_topics, 1.0 / n_topics);
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> topic_unif(0, n_topics - 1);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_topics);
    std::vector<int> assignment(ids.size());
    for (size_t j = 0; j < ids.size(); ++j) {
        assignment[j] = topic_unif(rng);
        ++counts[assignment[j]];
    }

    std::vector<double> weights(static_cast<size_t>(n_topics));
    for (int sweep = 0; sweep < fold_in_iters; ++sweep) {
        for (size_t j = 0; j < ids.size(); ++j) {
            const int w = ids[j];
            --counts[assignment[j]];
            for (int k = 0; k < n_topics; ++k) {
                weights[static_cast<size_t>(k)] = (counts[k] + model.alpha) * model.phi(k, w);
            }
            assignment[j] = sample_discrete(weights, rng);
            ++counts[assignment[j]];
        }
    }

    DocVector theta(n_topics);
    const double denom = static_cast<double>(ids.size()) + model.alpha * n_topics;
    for (int k = 0; k < n_topics; ++k) theta[k] = (counts[k] + model.alpha) / denom;
    theta /= theta.sum();
    return theta;
}

FeatureMatrix lda_matrix(const LdaModel& model, const Corpus& corpus,
                         const std::vector<int>& doc_ids, int fold_in_iters,
                         std::uint64_t seed) {
    FeatureMatrix m;
    m.kind = "lda";
    m.doc_ids = doc_ids;
    m.rows.resize(static_cast<Eigen::Index>(doc_ids.size()), model.n_topics);
    for (size_t i = 0; i < doc_ids.size(); ++i) {
        // Per-document seed keeps rows independent of batch composition.
        DocVector theta = lda_transform(model, corpus.doc(doc_ids[i]).tokens, fold_in_iters,
                                        seed + static_cast<std::uint64_t>(doc_ids[i]));
        m.rows.row(static_cast<Eigen::Index>(i)) = theta.transpose();
    }
    return m;
}

}  // namespace deepdoc
