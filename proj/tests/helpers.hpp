#pragma once

// Test-only utilities: synthetic corpora and independent numeric oracles.
// The oracles here deliberately avoid the library's own code paths.

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "deepdoc/corpus.hpp"

namespace testutil {

// Corpus built in memory, without touching the filesystem.
inline deepdoc::Corpus make_corpus(const std::vector<std::pair<std::string, std::string>>& docs) {
    deepdoc::Corpus corpus;
    std::set<std::string> labels;
    for (const auto& [label, text] : docs) {
        deepdoc::Document doc;
        doc.id = static_cast<int>(corpus.documents.size());
        doc.raw_text = text;
        doc.tokens = deepdoc::preprocess(text);
        doc.label = label;
        corpus.documents.push_back(std::move(doc));
        labels.insert(label);
    }
    corpus.labels.assign(labels.begin(), labels.end());
    return corpus;
}

// Letter-only suffix so the tokenizer (which drops digits) keeps words distinct.
inline std::string letter_suffix(int n) {
    std::string s;
    s += static_cast<char>('a' + n / 26);
    s += static_cast<char>('a' + n % 26);
    return s;
}

// Corpus with per-topic disjoint vocabularies: topic t draws only from its
// own vocab_per_topic words.
inline deepdoc::Corpus make_disjoint_topic_corpus(int n_topics, int docs_per_topic,
                                                  int words_per_doc, int vocab_per_topic,
                                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, std::string>> docs;
    for (int t = 0; t < n_topics; ++t) {
        std::string topic = "topic" + std::string(1, static_cast<char>('a' + t));
        std::uniform_int_distribution<int> pick(0, vocab_per_topic - 1);
        for (int d = 0; d < docs_per_topic; ++d) {
            std::string text;
            for (int w = 0; w < words_per_doc; ++w) {
                text += topic + "word" + letter_suffix(pick(rng)) + " ";
            }
            docs.emplace_back(topic, text);
        }
    }
    return make_corpus(docs);
}

inline std::vector<int> all_ids(const deepdoc::Corpus& corpus) {
    std::vector<int> ids(corpus.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ids;
}

// Scratch directory under the system temp root, removed on destruction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("deepdoc_test_" + tag + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---- Independent SVD oracle ---------------------------------------------
// Two-sided Jacobi rotations on A^T A; no Eigen decomposition routines.
struct JacobiSvd {
    Eigen::MatrixXd v;           // right singular vectors (columns)
    Eigen::VectorXd singular;    // descending
};

inline JacobiSvd jacobi_svd_oracle(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.cols();
    Eigen::MatrixXd s = a.transpose() * a;  // symmetric PSD
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-24) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(s(p, q)) < 1e-18) continue;
                const double theta = 0.5 * std::atan2(2.0 * s(p, q), s(q, q) - s(p, p));
                const double c = std::cos(theta);
                const double t = std::sin(theta);
                Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
                rot(p, p) = c;
                rot(q, q) = c;
                rot(p, q) = t;
                rot(q, p) = -t;
                s = rot.transpose() * s * rot;
                v = v * rot;
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index x, Eigen::Index y) { return s(x, x) > s(y, y); });

    JacobiSvd result;
    result.v.resize(n, n);
    result.singular.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        result.v.col(i) = v.col(order[static_cast<size_t>(i)]);
        result.singular[i] = std::sqrt(std::max(0.0, s(order[static_cast<size_t>(i)],
                                                       order[static_cast<size_t>(i)])));
    }
    return result;
}

}  // namespace testutil
