#include "deepdoc/siamese.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace deepdoc {

double lrelu(double x, double epsilon) { return std::max(epsilon * x, x); }

double lrelu_grad(double x, double epsilon) { return x > 0.0 ? 1.0 : epsilon; }

double lrate(long iteration, const TrainConfig& config) {
    return config.lr0 / (1.0 + static_cast<double>(iteration) / config.s);
}

SiameseParams init_params(int input_dim, int hidden_dim, int combo_dim,
                          const TrainConfig& config) {
    if (input_dim < 1 || hidden_dim < 1 || combo_dim < 1) {
        throw SiameseError("init_params: dimensions must be >= 1");
    }
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unif(-config.init_range, config.init_range);

    SiameseParams p;
    p.w1.resize(hidden_dim, input_dim);
    p.w21.resize(combo_dim, 2 * hidden_dim);
    p.w22.resize(combo_dim);
    for (Eigen::Index i = 0; i < p.w1.rows(); ++i)
        for (Eigen::Index j = 0; j < p.w1.cols(); ++j) p.w1(i, j) = unif(rng);
    for (Eigen::Index i = 0; i < p.w21.rows(); ++i)
        for (Eigen::Index j = 0; j < p.w21.cols(); ++j) p.w21(i, j) = unif(rng);
    for (Eigen::Index j = 0; j < p.w22.cols(); ++j) p.w22(j) = unif(rng);
    p.b1 = Eigen::VectorXd::Zero(hidden_dim);
    p.b21 = Eigen::VectorXd::Zero(combo_dim);
    p.b22 = 0.0;
    return p;
}

namespace {

Eigen::VectorXd lrelu_vec(const Eigen::VectorXd& z, double epsilon) {
    return z.unaryExpr([epsilon](double x) { return lrelu(x, epsilon); });
}

Eigen::VectorXd lrelu_grad_vec(const Eigen::VectorXd& z, double epsilon) {
    return z.unaryExpr([epsilon](double x) { return lrelu_grad(x, epsilon); });
}

struct BranchState {
    Eigen::VectorXd z;  // pre-activation W1 x + b1
    Eigen::VectorXd h;  // post-activation, post-dropout
};

BranchState branch_forward(const SiameseParams& params, const DocVector& x,
                           double epsilon, const Eigen::VectorXd* mask,
                           double dropout_p) {
    if (x.size() != params.w1.cols()) {
        throw SiameseError("subnet_forward: input dimension mismatch");
    }
    BranchState state;
    state.z = params.w1 * x + params.b1;
    state.h = lrelu_vec(state.z, epsilon);
    if (mask != nullptr) {
        state.h = state.h.cwiseProduct(*mask) / (1.0 - dropout_p);
    }
    return state;
}

}  // namespace

Eigen::VectorXd subnet_forward(const SiameseParams& params, const DocVector& x,
                               double epsilon, const Eigen::VectorXd* dropout_mask,
                               double dropout_p) {
    return branch_forward(params, x, epsilon, dropout_mask, dropout_p).h;
}

ForwardResult forward(const SiameseParams& params, const DocVector& xa,
                      const DocVector& xb, double epsilon,
                      const DropoutMasks* masks, double dropout_p) {
    const Eigen::VectorXd* ma = masks ? &masks->a : nullptr;
    const Eigen::VectorXd* mb = masks ? &masks->b : nullptr;
    BranchState a = branch_forward(params, xa, epsilon, ma, dropout_p);
    BranchState b = branch_forward(params, xb, epsilon, mb, dropout_p);

    Eigen::VectorXd u(a.h.size() + b.h.size());
    u << a.h, b.h;
    Eigen::VectorXd z = lrelu_vec(params.w21 * u + params.b21, epsilon);
    ForwardResult result;
    result.ha = std::move(a.h);
    result.hb = std::move(b.h);
    result.score = std::tanh(params.w22.dot(z) + params.b22);
    return result;
}

double mse_loss(const std::vector<double>& scores, const std::vector<double>& targets) {
    if (scores.size() != targets.size() || scores.empty()) {
        throw SiameseError("mse_loss: score/target length mismatch");
    }
    double total = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        double d = scores[i] - targets[i];
        total += d * d;
    }
    return total / static_cast<double>(scores.size());
}

Gradients backward(const SiameseParams& params, const DocVector& xa,
                   const DocVector& xb, double target, double epsilon,
                   const DropoutMasks* masks, double dropout_p) {
    const Eigen::VectorXd* ma = masks ? &masks->a : nullptr;
    const Eigen::VectorXd* mb = masks ? &masks->b : nullptr;
    BranchState a = branch_forward(params, xa, epsilon, ma, dropout_p);
    BranchState b = branch_forward(params, xb, epsilon, mb, dropout_p);

    const auto h = a.h.size();
    Eigen::VectorXd u(2 * h);
    u << a.h, b.h;
    Eigen::VectorXd zc_pre = params.w21 * u + params.b21;
    Eigen::VectorXd zc = lrelu_vec(zc_pre, epsilon);
    double score = std::tanh(params.w22.dot(zc) + params.b22);

    Gradients g;
    // L = (score - target)^2, score = tanh(out)
    double d_out = 2.0 * (score - target) * (1.0 - score * score);
    g.w22 = d_out * zc.transpose();
    g.b22 = d_out;

    Eigen::VectorXd d_zc = (params.w22.transpose() * d_out)
                               .cwiseProduct(lrelu_grad_vec(zc_pre, epsilon));
    g.w21 = d_zc * u.transpose();
    g.b21 = d_zc;

    Eigen::VectorXd d_u = params.w21.transpose() * d_zc;
    auto branch_grads = [&](const BranchState& state, const DocVector& x,
                            const Eigen::VectorXd* mask, Eigen::VectorXd d_h) {
        if (mask != nullptr) {
            d_h = d_h.cwiseProduct(*mask) / (1.0 - dropout_p);
        }
        Eigen::VectorXd d_z = d_h.cwiseProduct(lrelu_grad_vec(state.z, epsilon));
        return std::pair<Eigen::MatrixXd, Eigen::VectorXd>{d_z * x.transpose(), d_z};
    };
    auto [gw1a, gb1a] = branch_grads(a, xa, ma, d_u.head(h));
    auto [gw1b, gb1b] = branch_grads(b, xb, mb, d_u.tail(h));

    g.w1_branch_a = std::move(gw1a);
    g.w1_branch_b = std::move(gw1b);
    g.b1_branch_a = std::move(gb1a);
    g.b1_branch_b = std::move(gb1b);
    // Shared-weight update: average of the two branch gradients.
    g.w1 = 0.5 * (g.w1_branch_a + g.w1_branch_b);
    g.b1 = 0.5 * (g.b1_branch_a + g.b1_branch_b);
    return g;
}

namespace {

double validation_mse(const SiameseParams& params, const PairSet& pairs,
                      const FeatureMatrix& features, double epsilon,
                      const std::vector<int>& row_of_doc) {
    double total = 0.0;
    for (const auto& pair : pairs.pairs) {
        DocVector xa = features.rows.row(row_of_doc[static_cast<size_t>(pair.a_id)]);
        DocVector xb = features.rows.row(row_of_doc[static_cast<size_t>(pair.b_id)]);
        double score = forward(params, xa, xb, epsilon).score;
        double d = score - pair.relevancy;
        total += d * d;
    }
    return total / static_cast<double>(pairs.pairs.size());
}

std::vector<int> build_row_index(const FeatureMatrix& features) {
    int max_id = 0;
    for (int id : features.doc_ids) max_id = std::max(max_id, id);
    std::vector<int> row_of_doc(static_cast<size_t>(max_id) + 1, -1);
    for (size_t i = 0; i < features.doc_ids.size(); ++i) {
        row_of_doc[static_cast<size_t>(features.doc_ids[i])] = static_cast<int>(i);
    }
    return row_of_doc;
}

}  // namespace

std::pair<SiameseParams, TrainTrace> train(const PairSet& pair_set,
                                           const FeatureMatrix& features,
                                           const PairSet& val_pairs,
                                           const TrainConfig& config,
                                           int hidden_dim, int combo_dim) {
    if (pair_set.pairs.empty() || val_pairs.pairs.empty()) {
        throw SiameseError("train: empty pair set");
    }
    std::vector<int> row_of_doc = build_row_index(features);
    for (const auto& pair : pair_set.pairs) {
        if (pair.a_id >= static_cast<int>(row_of_doc.size()) ||
            pair.b_id >= static_cast<int>(row_of_doc.size()) ||
            row_of_doc[static_cast<size_t>(pair.a_id)] < 0 ||
            row_of_doc[static_cast<size_t>(pair.b_id)] < 0) {
            throw SiameseError("train: pair references a document without features");
        }
    }

    SiameseParams params = init_params(features.dim(), hidden_dim, combo_dim, config);
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::bernoulli_distribution keep(1.0 - config.dropout_p);

    std::vector<size_t> order(pair_set.pairs.size());
    std::iota(order.begin(), order.end(), size_t{0});

    TrainTrace trace;
    SiameseParams best = params;
    double best_val = validation_mse(params, val_pairs, features, config.epsilon, row_of_doc);
    trace.best_validation_mse = best_val;
    trace.best_iteration = 0;
    trace.records.push_back({0, 0.0, best_val, lrate(0, config)});

    int evals_without_improvement = 0;
    double running_sq = 0.0;
    long running_n = 0;
    long iteration = 0;
    const bool use_dropout = config.dropout_p > 0.0;
    trace.stopping_reason = "max_iters";

    while (iteration < config.max_iters) {
        std::shuffle(order.begin(), order.end(), rng);  // fresh order per epoch
        for (size_t idx : order) {
            if (iteration >= config.max_iters) break;
            const auto& pair = pair_set.pairs[idx];
            DocVector xa = features.rows.row(row_of_doc[static_cast<size_t>(pair.a_id)]);
            DocVector xb = features.rows.row(row_of_doc[static_cast<size_t>(pair.b_id)]);

            DropoutMasks masks;
            const DropoutMasks* mask_ptr = nullptr;
            if (use_dropout) {
                masks.a.resize(hidden_dim);
                masks.b.resize(hidden_dim);
                for (int j = 0; j < hidden_dim; ++j) masks.a[j] = keep(rng) ? 1.0 : 0.0;
                for (int j = 0; j < hidden_dim; ++j) masks.b[j] = keep(rng) ? 1.0 : 0.0;
                mask_ptr = &masks;
            }

            ForwardResult fwd = forward(params, xa, xb, config.epsilon, mask_ptr,
                                        config.dropout_p);
            double err = fwd.score - pair.relevancy;
            if (!std::isfinite(err)) {
                throw SiameseError("train: non-finite loss at iteration " +
                                   std::to_string(iteration));
            }
            running_sq += err * err;
            ++running_n;

            Gradients g = backward(params, xa, xb, pair.relevancy, config.epsilon,
                                   mask_ptr, config.dropout_p);
            const double lr = lrate(iteration, config);
            params.w1 -= lr * g.w1;
            params.w21 -= lr * g.w21;
            params.w22 -= lr * g.w22;
            if (config.use_biases) {
                params.b1 -= lr * g.b1;
                params.b21 -= lr * g.b21;
                params.b22 -= lr * g.b22;
            }
            ++iteration;

            if (iteration % config.eval_every == 0) {
                double val = validation_mse(params, val_pairs, features, config.epsilon,
                                            row_of_doc);
                double train_mse = running_sq / static_cast<double>(std::max(running_n, 1L));
                running_sq = 0.0;
                running_n = 0;
                trace.records.push_back({iteration, train_mse, val, lrate(iteration, config)});
                if (val < best_val) {
                    best_val = val;
                    best = params;
                    trace.best_validation_mse = val;
                    trace.best_iteration = iteration;
                    evals_without_improvement = 0;
                } else {
                    ++evals_without_improvement;
                    if (evals_without_improvement > config.patience) {
                        trace.stopping_reason = "patience";
                        return {best, trace};
                    }
                }
            }
        }
    }
    return {best, trace};
}

FeatureMatrix embed(const SiameseParams& params, const FeatureMatrix& features,
                    double epsilon) {
    if (features.dim() != params.input_dim()) {
        throw SiameseError("embed: feature dimension mismatch");
    }
    FeatureMatrix out;
    out.kind = "deep";
    out.doc_ids = features.doc_ids;
    out.split_seed = features.split_seed;
    out.rows.resize(features.rows.rows(), params.hidden_dim());
    for (Eigen::Index i = 0; i < features.rows.rows(); ++i) {
        DocVector x = features.rows.row(i);
        out.rows.row(i) = subnet_forward(params, x, epsilon).transpose();
    }
    return out;
}

}  // namespace deepdoc
