#include "deepdoc/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace deepdoc {

namespace {

// Row of conditional probabilities for one point at a given precision
// beta = 1/(2 sigma^2); returns the Shannon entropy (nats).
double conditional_row(const Eigen::VectorXd& sq_dists, Eigen::Index self,
                       double beta, Eigen::VectorXd& row) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < sq_dists.size(); ++j) {
        row[j] = j == self ? 0.0 : std::exp(-beta * sq_dists[j]);
        sum += row[j];
    }
    if (sum <= 0.0) return 0.0;
    double entropy = 0.0;
    for (Eigen::Index j = 0; j < sq_dists.size(); ++j) {
        row[j] /= sum;
        if (row[j] > 1e-300) entropy -= row[j] * std::log(row[j]);
    }
    return entropy;
}

}  // namespace

Eigen::MatrixXd tsne_joint_probabilities(const Eigen::MatrixXd& x, double perplexity) {
    const Eigen::Index n = x.rows();
    if (n < 4) throw TsneError("tsne: need at least 4 points");
    if (perplexity >= (static_cast<double>(n) - 1.0) / 3.0) {
        throw TsneError("tsne: perplexity too large for n");
    }

    // Pairwise squared distances.
    Eigen::VectorXd sq_norms = x.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = sq_norms.replicate(1, n) + sq_norms.transpose().replicate(n, 1) -
                         2.0 * x * x.transpose();
    d2 = d2.cwiseMax(0.0);
    double max_d2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) max_d2 = std::max(max_d2, d2(i, j));
        }
    }
    if (max_d2 == 0.0) throw TsneError("tsne: all points identical, P undefined");

    const double target_entropy = std::log(perplexity);
    Eigen::MatrixXd p(n, n);
    Eigen::VectorXd row(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 200; ++it) {
            const double entropy = conditional_row(d2.row(i), i, beta, row);
            const double diff = entropy - target_entropy;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0.0) {  // too flat: raise beta
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
            } else {
                hi = beta;
                beta = 0.5 * (beta + lo);
            }
        }
        conditional_row(d2.row(i), i, beta, row);
        p.row(i) = row.transpose();
    }

    Eigen::MatrixXd joint = (p + p.transpose()) / (2.0 * static_cast<double>(n));
    joint = joint.cwiseMax(1e-12);
    joint.diagonal().setZero();
    joint /= joint.sum();
    return joint;
}

TsneResult tsne(const Eigen::MatrixXd& x, const TsneConfig& config) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd p = tsne_joint_probabilities(x, config.perplexity);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1e-4);
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, 0) = gauss(rng);
        y(i, 1) = gauss(rng);
    }
    Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, 2);

    auto q_matrix = [&](const Eigen::MatrixXd& coords, Eigen::MatrixXd& weights) {
        Eigen::VectorXd sq = coords.rowwise().squaredNorm();
        weights = (sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                   2.0 * coords * coords.transpose());
        weights = (1.0 + weights.cwiseMax(0.0).array()).inverse().matrix();
        weights.diagonal().setZero();
        return weights.sum();
    };

    auto kl_divergence = [&](const Eigen::MatrixXd& p_eff) {
        Eigen::MatrixXd weights;
        const double z = q_matrix(y, weights);
        double kl = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j || p_eff(i, j) <= 0.0) continue;
                const double q = std::max(weights(i, j) / z, 1e-12);
                kl += p_eff(i, j) * std::log(p_eff(i, j) / q);
            }
        }
        return kl;
    };

    TsneResult result;
    result.initial_kl = kl_divergence(p);
    result.kl_trace.reserve(static_cast<size_t>(config.iters));

    Eigen::MatrixXd weights;
    for (int it = 0; it < config.iters; ++it) {
        const bool exaggerating = it < config.exaggeration_iters;
        const double exaggeration = exaggerating ? config.exaggeration_factor : 1.0;
        const double z = q_matrix(y, weights);
        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, 2);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q = weights(i, j) / z;
                const double coeff = 4.0 * (exaggeration * p(i, j) - q) * weights(i, j);
                grad.row(i) += coeff * (y.row(i) - y.row(j));
            }
        }
        const double momentum = it < config.momentum_switch_iter ? config.momentum_early
                                                                 : config.momentum_late;
        velocity = momentum * velocity - config.learning_rate * grad;
        y += velocity;
        y.rowwise() -= y.colwise().mean();  // keep the embedding centered
        result.kl_trace.push_back(kl_divergence(p));
    }

    result.final_kl = result.kl_trace.empty() ? result.initial_kl : result.kl_trace.back();
    result.coords = std::move(y);
    return result;
}

void export_scatter(const Eigen::MatrixXd& coords, const std::vector<int>& doc_ids,
                    const std::vector<std::string>& labels,
                    const std::string& csv_path, const std::string& svg_path) {
    const auto n = coords.rows();
    if (static_cast<Eigen::Index>(labels.size()) != n ||
        static_cast<Eigen::Index>(doc_ids.size()) != n) {
        throw TsneError("export_scatter: label/id count mismatch");
    }

    std::ofstream csv(csv_path);
    if (!csv) throw TsneError("export_scatter: cannot write " + csv_path);
    csv << "doc_id,x,y,label\n";
    csv.precision(17);
    for (Eigen::Index i = 0; i < n; ++i) {
        csv << doc_ids[static_cast<size_t>(i)] << ',' << coords(i, 0) << ','
            << coords(i, 1) << ',' << labels[static_cast<size_t>(i)] << '\n';
    }
    csv.close();
    if (!csv) throw TsneError("export_scatter: write failed for " + csv_path);

    // Fixed palette assigned by lexicographic label order.
    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                     "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                     "#bcbd22", "#17becf"};
    std::set<std::string> unique(labels.begin(), labels.end());
    std::vector<std::string> classes(unique.begin(), unique.end());
    auto color_of = [&](const std::string& label) {
        const auto idx = static_cast<size_t>(
            std::lower_bound(classes.begin(), classes.end(), label) - classes.begin());
        return kPalette[idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
    };

    const double width = 800.0, height = 600.0, margin = 40.0;
    const double min_x = coords.col(0).minCoeff(), max_x = coords.col(0).maxCoeff();
    const double min_y = coords.col(1).minCoeff(), max_y = coords.col(1).maxCoeff();
    const double span_x = std::max(max_x - min_x, 1e-12);
    const double span_y = std::max(max_y - min_y, 1e-12);

    std::ostringstream svg;
    svg.precision(6);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        const double px = margin + (coords(i, 0) - min_x) / span_x * (width - 2 * margin - 120);
        const double py = height - margin - (coords(i, 1) - min_y) / span_y * (height - 2 * margin);
        svg << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3\" fill=\""
            << color_of(labels[static_cast<size_t>(i)]) << "\" fill-opacity=\"0.7\"/>\n";
    }
    double ly = margin;
    for (const auto& cls : classes) {
        svg << "<circle cx=\"" << width - 110 << "\" cy=\"" << ly << "\" r=\"4\" fill=\""
            << color_of(cls) << "\"/>\n";
        svg << "<text x=\"" << width - 100 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << cls << "</text>\n";
        ly += 18;
    }
    svg << "</svg>\n";

    std::ofstream out(svg_path);
    if (!out) throw TsneError("export_scatter: cannot write " + svg_path);
    out << svg.str();
}

}  // namespace deepdoc
