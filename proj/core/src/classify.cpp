#include "deepdoc/classify.hpp"

#include "deepdoc/siamese.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <set>

namespace deepdoc {

LabeledDataset make_dataset(const FeatureMatrix& features, const Corpus& corpus) {
    LabeledDataset ds;
    ds.x = features.rows;
    ds.y.reserve(features.doc_ids.size());
    std::set<std::string> labels;
    for (int id : features.doc_ids) {
        ds.y.push_back(corpus.doc(id).label);
        labels.insert(corpus.doc(id).label);
    }
    ds.label_set.assign(labels.begin(), labels.end());
    return ds;
}

EvalReport f1_report(const std::vector<std::string>& pred,
                     const std::vector<std::string>& gold,
                     const std::vector<std::string>& label_set) {
    if (pred.size() != gold.size()) throw ClassifyError("f1_report: length mismatch");

    std::map<std::string, int> index;
    for (size_t i = 0; i < label_set.size(); ++i) {
        index[label_set[i]] = static_cast<int>(i);
    }
    const int l = static_cast<int>(label_set.size());

    EvalReport report;
    report.labels = label_set;
    report.confusion = Eigen::MatrixXi::Zero(l, l);
    long correct = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
        ++report.confusion(index.at(gold[i]), index.at(pred[i]));
        if (gold[i] == pred[i]) ++correct;
    }

    report.precision.resize(static_cast<size_t>(l));
    report.recall.resize(static_cast<size_t>(l));
    report.f1.resize(static_cast<size_t>(l));
    for (int c = 0; c < l; ++c) {
        const double tp = report.confusion(c, c);
        const double pred_c = report.confusion.col(c).sum();
        const double gold_c = report.confusion.row(c).sum();
        const double p = pred_c > 0 ? tp / pred_c : 0.0;  // 0/0 := 0
        const double r = gold_c > 0 ? tp / gold_c : 0.0;
        report.precision[static_cast<size_t>(c)] = p;
        report.recall[static_cast<size_t>(c)] = r;
        report.f1[static_cast<size_t>(c)] = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
    }
    report.macro_f1 = std::accumulate(report.f1.begin(), report.f1.end(), 0.0) /
                      static_cast<double>(l);
    report.micro_f1 = gold.empty() ? 0.0 : static_cast<double>(correct) /
                                               static_cast<double>(gold.size());
    return report;
}

namespace {

double cosine(const DocVector& a, const Eigen::RowVectorXd& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b.transpose()) / (na * nb);
}

}  // namespace

std::string knn_predict(const LabeledDataset& train, const DocVector& query, int k) {
    if (train.x.rows() == 0) throw ClassifyError("knn_predict: empty training set");
    if (k < 1) throw ClassifyError("knn_predict: k must be >= 1");
    if (k > train.x.rows()) {
        std::cerr << "knn_predict: k=" << k << " exceeds training size, clamping\n";
        k = static_cast<int>(train.x.rows());
    }

    std::vector<std::pair<double, size_t>> sims(static_cast<size_t>(train.x.rows()));
    for (Eigen::Index i = 0; i < train.x.rows(); ++i) {
        sims[static_cast<size_t>(i)] = {cosine(query, train.x.row(i)),
                                        static_cast<size_t>(i)};
    }
    std::partial_sort(sims.begin(), sims.begin() + k, sims.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });

    std::map<std::string, std::pair<int, double>> votes;  // label -> (count, sim sum)
    for (int i = 0; i < k; ++i) {
        auto& entry = votes[train.y[sims[static_cast<size_t>(i)].second]];
        ++entry.first;
        entry.second += sims[static_cast<size_t>(i)].first;
    }
    std::string best;
    std::pair<int, double> best_score{-1, 0.0};
    for (const auto& [label, score] : votes) {
        if (score.first > best_score.first ||
            (score.first == best_score.first && score.second > best_score.second)) {
            best = label;
            best_score = score;
        }
        // equal count and sim sum: first (lexicographically smallest) wins
    }
    return best;
}

SvmModel svm_train(const LabeledDataset& train, int epochs, double reg,
                   std::uint64_t seed, double lr, bool use_biases) {
    if (train.label_set.size() < 2) throw ClassifyError("svm_train: need >= 2 classes");

    const auto n = train.x.rows();
    const auto d = train.x.cols();
    SvmModel model;
    model.labels = train.label_set;
    model.w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.labels.size()), d);
    model.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.labels.size()));

    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    for (size_t c = 0; c < model.labels.size(); ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        for (int epoch = 0; epoch < epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            for (Eigen::Index i : order) {
                const double y = train.y[static_cast<size_t>(i)] == model.labels[c] ? 1.0 : -1.0;
                const double margin = y * (model.w.row(ci).dot(train.x.row(i)) + model.b[ci]);
                model.w.row(ci) *= (1.0 - lr * reg);
                if (margin < 1.0) {
                    model.w.row(ci) += lr * y * train.x.row(i);
                    if (use_biases) model.b[ci] += lr * y;
                }
            }
        }
    }
    return model;
}

std::string svm_predict(const SvmModel& model, const DocVector& x) {
    Eigen::VectorXd scores = model.w * x + model.b;
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = c;  // ties keep lexicographic first
    }
    return model.labels[static_cast<size_t>(best)];
}

// ---- Decision tree ----------------------------------------------------

namespace {

struct TreeBuilder {
    const LabeledDataset& train;
    int max_depth;
    int min_leaf;
    double feature_frac;  // <= 0: all features
    std::mt19937_64 rng;

    double gini(const std::map<std::string, int>& counts, int total) const {
        if (total == 0) return 0.0;
        double g = 1.0;
        for (const auto& [label, count] : counts) {
            const double p = static_cast<double>(count) / total;
            g -= p * p;
        }
        return g;
    }

    std::string majority(const std::vector<Eigen::Index>& rows) const {
        std::map<std::string, int> counts;
        for (Eigen::Index i : rows) ++counts[train.y[static_cast<size_t>(i)]];
        std::string best;
        int best_count = -1;
        for (const auto& [label, count] : counts) {
            if (count > best_count) {  // map order gives lexicographic tie-break
                best = label;
                best_count = count;
            }
        }
        return best;
    }

    std::vector<int> candidate_features() {
        const int d = static_cast<int>(train.x.cols());
        std::vector<int> features(static_cast<size_t>(d));
        std::iota(features.begin(), features.end(), 0);
        if (feature_frac <= 0.0 || feature_frac >= 1.0) return features;
        int keep = std::max(1, static_cast<int>(std::lround(feature_frac * d)));
        std::shuffle(features.begin(), features.end(), rng);
        features.resize(static_cast<size_t>(keep));
        std::sort(features.begin(), features.end());
        return features;
    }

    std::unique_ptr<TreeNode> build(const std::vector<Eigen::Index>& rows, int depth) {
        auto node = std::make_unique<TreeNode>();
        std::map<std::string, int> counts;
        for (Eigen::Index i : rows) ++counts[train.y[static_cast<size_t>(i)]];
        const int total = static_cast<int>(rows.size());
        const double parent_gini = gini(counts, total);

        if (depth >= max_depth || parent_gini == 0.0 ||
            total < 2 * min_leaf) {
            node->label = majority(rows);
            return node;
        }

        // Best split by maximum Gini-impurity decrease; midpoint thresholds.
        // Zero-gain splits are accepted on impure nodes (XOR-style data has no
        // single split with positive gain, but a deeper tree still solves it).
        double best_decrease = -1.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        for (int f : candidate_features()) {
            std::vector<std::pair<double, Eigen::Index>> sorted;
            sorted.reserve(rows.size());
            for (Eigen::Index i : rows) sorted.emplace_back(train.x(i, f), i);
            std::sort(sorted.begin(), sorted.end());

            std::map<std::string, int> left_counts;
            std::map<std::string, int> right_counts = counts;
            int n_left = 0;
            for (size_t i = 0; i + 1 < sorted.size(); ++i) {
                const std::string& label = train.y[static_cast<size_t>(sorted[i].second)];
                ++left_counts[label];
                --right_counts[label];
                ++n_left;
                if (sorted[i].first == sorted[i + 1].first) continue;
                if (n_left < min_leaf || total - n_left < min_leaf) continue;
                const double wl = static_cast<double>(n_left) / total;
                const double decrease = parent_gini - wl * gini(left_counts, n_left) -
                                        (1.0 - wl) * gini(right_counts, total - n_left);
                if (decrease > best_decrease + 1e-15) {
                    best_decrease = decrease;
                    best_feature = f;
                    best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
                }
            }
        }

        if (best_feature < 0) {
            node->label = majority(rows);
            return node;
        }

        std::vector<Eigen::Index> left_rows, right_rows;
        for (Eigen::Index i : rows) {
            (train.x(i, best_feature) <= best_threshold ? left_rows : right_rows).push_back(i);
        }
        node->feature = best_feature;
        node->threshold = best_threshold;
        node->left = build(left_rows, depth + 1);
        node->right = build(right_rows, depth + 1);
        return node;
    }
};

}  // namespace

DTreeModel dtree_train(const LabeledDataset& train, int max_depth, int min_leaf,
                       std::uint64_t seed) {
    if (train.x.rows() == 0) throw ClassifyError("dtree_train: empty training set");
    TreeBuilder builder{train, max_depth, std::max(min_leaf, 1), 0.0,
                        std::mt19937_64(seed)};
    std::vector<Eigen::Index> rows(static_cast<size_t>(train.x.rows()));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    DTreeModel model;
    model.root = builder.build(rows, 0);
    return model;
}

std::string dtree_predict(const DTreeModel& model, const DocVector& x) {
    const TreeNode* node = model.root.get();
    while (node->feature >= 0) {
        node = x[node->feature] <= node->threshold ? node->left.get() : node->right.get();
    }
    return node->label;
}

RForestModel rforest_train(const LabeledDataset& train, int n_trees,
                           double feature_frac, std::uint64_t seed,
                           int max_depth, int min_leaf, bool bootstrap) {
    if (n_trees < 1) throw ClassifyError("rforest_train: n_trees must be >= 1");
    const auto n = train.x.rows();
    if (feature_frac <= 0.0) {
        feature_frac = std::sqrt(static_cast<double>(train.x.cols())) /
                       static_cast<double>(train.x.cols());
    }

    RForestModel model;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (int t = 0; t < n_trees; ++t) {
        LabeledDataset sample;
        if (bootstrap) {
            sample.x.resize(n, train.x.cols());
            sample.y.resize(static_cast<size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::Index j = pick(rng);
                sample.x.row(i) = train.x.row(j);
                sample.y[static_cast<size_t>(i)] = train.y[static_cast<size_t>(j)];
            }
            sample.label_set = train.label_set;
        }
        const LabeledDataset& data = bootstrap ? sample : train;
        TreeBuilder builder{data, max_depth, std::max(min_leaf, 1), feature_frac,
                            std::mt19937_64(rng())};
        std::vector<Eigen::Index> rows(static_cast<size_t>(data.x.rows()));
        std::iota(rows.begin(), rows.end(), Eigen::Index{0});
        DTreeModel tree;
        tree.root = builder.build(rows, 0);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::string rforest_predict(const RForestModel& model, const DocVector& x) {
    std::map<std::string, int> votes;
    for (const auto& tree : model.trees) ++votes[dtree_predict(tree, x)];
    std::string best;
    int best_count = -1;
    for (const auto& [label, count] : votes) {
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

// ---- MLP ---------------------------------------------------------------

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
    Eigen::VectorXd shifted = z.array() - z.maxCoeff();
    Eigen::VectorXd e = shifted.array().exp();
    return e / e.sum();
}

}  // namespace

MlpModel mlp_train(const LabeledDataset& train, int hidden, int epochs, double lr,
                   std::uint64_t seed) {
    if (train.label_set.size() < 2) throw ClassifyError("mlp_train: need >= 2 classes");
    const auto d = train.x.cols();
    const auto l = static_cast<Eigen::Index>(train.label_set.size());

    std::map<std::string, Eigen::Index> index;
    for (Eigen::Index c = 0; c < l; ++c) index[train.label_set[static_cast<size_t>(c)]] = c;

    MlpModel model;
    model.labels = train.label_set;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    model.w1.resize(hidden, d);
    model.w2.resize(l, hidden);
    for (Eigen::Index i = 0; i < model.w1.size(); ++i) model.w1.data()[i] = unif(rng);
    for (Eigen::Index i = 0; i < model.w2.size(); ++i) model.w2.data()[i] = unif(rng);
    model.b1 = Eigen::VectorXd::Zero(hidden);
    model.b2 = Eigen::VectorXd::Zero(l);

    std::vector<Eigen::Index> order(static_cast<size_t>(train.x.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index i : order) {
            Eigen::VectorXd x = train.x.row(i);
            Eigen::VectorXd z1 = model.w1 * x + model.b1;
            Eigen::VectorXd h = z1.unaryExpr(
                [e = model.epsilon](double v) { return lrelu(v, e); });
            Eigen::VectorXd p = softmax(model.w2 * h + model.b2);
            if (!p.allFinite()) throw ClassifyError("mlp_train: non-finite loss");

            Eigen::VectorXd d_out = p;
            d_out[index.at(train.y[static_cast<size_t>(i)])] -= 1.0;
            Eigen::VectorXd d_h = model.w2.transpose() * d_out;
            Eigen::VectorXd d_z1 = d_h.cwiseProduct(z1.unaryExpr(
                [e = model.epsilon](double v) { return lrelu_grad(v, e); }));

            model.w2 -= lr * d_out * h.transpose();
            model.b2 -= lr * d_out;
            model.w1 -= lr * d_z1 * x.transpose();
            model.b1 -= lr * d_z1;
        }
    }
    return model;
}

Eigen::VectorXd mlp_probabilities(const MlpModel& model, const DocVector& x) {
    Eigen::VectorXd h = (model.w1 * x + model.b1)
                            .unaryExpr([e = model.epsilon](double v) { return lrelu(v, e); });
    return softmax(model.w2 * h + model.b2);
}

std::string mlp_predict(const MlpModel& model, const DocVector& x) {
    Eigen::VectorXd p = mlp_probabilities(model, x);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < p.size(); ++c) {
        if (p[c] > p[best]) best = c;
    }
    return model.labels[static_cast<size_t>(best)];
}

}  // namespace deepdoc
