#include <doctest.h>

#include <cmath>
#include <random>

#include "deepdoc/classify.hpp"
#include "helpers.hpp"

using namespace deepdoc;

namespace {

LabeledDataset two_point_dataset() {
    LabeledDataset ds;
    ds.x.resize(2, 2);
    ds.x << 1, 0, 0, 1;
    ds.y = {"A", "B"};
    ds.label_set = {"A", "B"};
    return ds;
}

}  // namespace

TEST_CASE("knn picks the nearest cosine neighbor") {
    LabeledDataset train = two_point_dataset();
    DocVector q(2);
    q << 0.9, 0.1;
    CHECK(knn_predict(train, q, 1) == "A");

    // a training row queries to its own label
    DocVector row0(2);
    row0 << 1, 0;
    CHECK(knn_predict(train, row0, 1) == "A");

    // cosine is scale-invariant
    CHECK(knn_predict(train, 100.0 * q, 1) == "A");
    CHECK(knn_predict(train, 0.001 * q, 1) == "A");
}

TEST_CASE("knn zero vectors and k clamping") {
    LabeledDataset train = two_point_dataset();
    DocVector zero = DocVector::Zero(2);
    CHECK_NOTHROW(knn_predict(train, zero, 1));  // cosine defined as 0
    CHECK(knn_predict(train, DocVector::Ones(2), 10) == "A");  // clamped, tie -> lexicographic
    CHECK_THROWS_AS(knn_predict(train, zero, 0), ClassifyError);
}

TEST_CASE("knn supports the k sweep used in evaluation") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.05);
    LabeledDataset train;
    train.x.resize(40, 2);
    for (int i = 0; i < 40; ++i) {
        const bool a = i < 20;
        train.x(i, 0) = (a ? 1.0 : 0.0) + noise(rng);
        train.x(i, 1) = (a ? 0.0 : 1.0) + noise(rng);
        train.y.push_back(a ? "A" : "B");
    }
    train.label_set = {"A", "B"};
    DocVector q(2);
    q << 1.0, 0.05;
    for (int k : {1, 5, 10, 15, 20}) CHECK(knn_predict(train, q, k) == "A");
}

TEST_CASE("svm separates a margin-0.5 two-class set perfectly") {
    LabeledDataset train;
    train.x.resize(10, 2);
    train.x << 1.0, 1.0, 1.5, 2.0, 2.0, 1.0, 1.2, 1.8, 1.8, 1.2,
               -1.0, -1.0, -1.5, -2.0, -2.0, -1.0, -1.2, -1.8, -1.8, -1.2;
    train.y = {"pos", "pos", "pos", "pos", "pos", "neg", "neg", "neg", "neg", "neg"};
    train.label_set = {"neg", "pos"};

    SvmModel model = svm_train(train, 50, 0.001, 1);
    // exhaustive check of the learned hyperplane on all 10 points
    for (int i = 0; i < 10; ++i) {
        CHECK(svm_predict(model, train.x.row(i)) == train.y[static_cast<size_t>(i)]);
    }
}

TEST_CASE("svm sign symmetry under mirrored data") {
    LabeledDataset train;
    train.x.resize(6, 2);
    train.x << 1, 0.5, 2, 1, 1.5, 0.8, -1, -0.5, -2, -1, -1.5, -0.8;
    train.y = {"p", "p", "p", "n", "n", "n"};
    train.label_set = {"n", "p"};

    LabeledDataset mirrored = train;
    mirrored.x = -train.x;

    SvmModel a = svm_train(train, 40, 0.001, 9);
    SvmModel b = svm_train(mirrored, 40, 0.001, 9);
    std::mt19937_64 rng(0);
    std::normal_distribution<double> gauss(0.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        DocVector q(2);
        q << gauss(rng), gauss(rng);
        CHECK(svm_predict(a, q) == svm_predict(b, -q));
    }
}

TEST_CASE("svm decision values scale with the input in the bias-free setup") {
    LabeledDataset train;
    train.x.resize(4, 2);
    train.x << 1, 0, 2, 0.2, -1, 0, -2, -0.2;
    train.y = {"p", "p", "n", "n"};
    train.label_set = {"n", "p"};
    SvmModel model = svm_train(train, 30, 0.001, 2, 0.01, /*use_biases=*/false);
    CHECK(model.b.norm() == 0.0);
    DocVector q(2);
    q << 1.0, 0.3;
    CHECK(svm_predict(model, q) == svm_predict(model, 5.0 * q));
}

TEST_CASE("svm rejects single-class sets") {
    LabeledDataset train;
    train.x.resize(2, 2);
    train.x << 1, 0, 0, 1;
    train.y = {"A", "A"};
    train.label_set = {"A"};
    CHECK_THROWS_AS(svm_train(train, 5, 0.001, 0), ClassifyError);
}

TEST_CASE("decision tree solves 2-D XOR at depth 2") {
    LabeledDataset train;
    train.x.resize(4, 2);
    train.x << 0, 0, 0, 1, 1, 0, 1, 1;
    train.y = {"A", "B", "B", "A"};
    train.label_set = {"A", "B"};

    DTreeModel model = dtree_train(train, 2, 1, 0);
    for (int i = 0; i < 4; ++i) {
        CHECK(dtree_predict(model, train.x.row(i)) == train.y[static_cast<size_t>(i)]);
    }
}

TEST_CASE("decision tree degenerate cases") {
    LabeledDataset pure;
    pure.x.resize(3, 1);
    pure.x << 1, 2, 3;
    pure.y = {"only", "only", "only"};
    pure.label_set = {"only"};
    DTreeModel leaf = dtree_train(pure, 5, 1, 0);
    CHECK(leaf.root->feature == -1);
    CHECK(dtree_predict(leaf, pure.x.row(0)) == "only");

    LabeledDataset mixed;
    mixed.x.resize(4, 1);
    mixed.x << 1, 2, 3, 4;
    mixed.y = {"A", "A", "A", "B"};
    mixed.label_set = {"A", "B"};
    DTreeModel stump = dtree_train(mixed, 0, 1, 0);  // max_depth 0 -> majority leaf
    CHECK(stump.root->feature == -1);
    CHECK(dtree_predict(stump, mixed.x.row(3)) == "A");
}

TEST_CASE("random forest reduces to a single tree without bootstrap") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    LabeledDataset train;
    train.x.resize(30, 3);
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 3; ++j) train.x(i, j) = gauss(rng);
        train.y.push_back(train.x(i, 0) + 0.2 * train.x(i, 1) > 0 ? "P" : "N");
    }
    train.label_set = {"N", "P"};

    DTreeModel tree = dtree_train(train, 8, 1, 4);
    RForestModel forest = rforest_train(train, 1, 1.0, 4, 8, 1, /*bootstrap=*/false);
    for (int trial = 0; trial < 50; ++trial) {
        DocVector q(3);
        for (int j = 0; j < 3; ++j) q[j] = gauss(rng);
        CHECK(rforest_predict(forest, q) == dtree_predict(tree, q));
    }
}

TEST_CASE("random forest majority vote and determinism") {
    LabeledDataset train;
    train.x.resize(8, 2);
    train.x << 0, 0, 0.1, 0, 0, 0.1, 0.1, 0.1, 1, 1, 0.9, 1, 1, 0.9, 0.9, 0.9;
    train.y = {"A", "A", "A", "A", "B", "B", "B", "B"};
    train.label_set = {"A", "B"};

    RForestModel f1 = rforest_train(train, 15, 0.0, 99);
    RForestModel f2 = rforest_train(train, 15, 0.0, 99);
    DocVector q(2);
    q << 0.05, 0.02;
    CHECK(rforest_predict(f1, q) == "A");
    CHECK(rforest_predict(f1, q) == rforest_predict(f2, q));
}

TEST_CASE("mlp softmax outputs normalize and training separates a toy set") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 0.1);
    LabeledDataset train;
    train.x.resize(30, 2);
    for (int i = 0; i < 30; ++i) {
        const int c = i % 3;
        train.x(i, 0) = (c == 0 ? 1.0 : c == 1 ? -1.0 : 0.0) + noise(rng);
        train.x(i, 1) = (c == 2 ? 1.0 : 0.0) + noise(rng);
        train.y.push_back(c == 0 ? "right" : c == 1 ? "left" : "up");
    }
    train.label_set = {"left", "right", "up"};

    MlpModel model = mlp_train(train, 16, 200, 0.05, 12);
    int correct = 0;
    for (int i = 0; i < 30; ++i) {
        Eigen::VectorXd p = mlp_probabilities(model, train.x.row(i));
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
        if (mlp_predict(model, train.x.row(i)) == train.y[static_cast<size_t>(i)]) ++correct;
    }
    CHECK(correct == 30);
}

TEST_CASE("mlp gradients match finite differences") {
    // Single SGD example; compare the update implied by one step against a
    // central finite difference of the cross-entropy loss.
    LabeledDataset train;
    train.x.resize(1, 3);
    train.x << 0.7, -0.3, 1.2;
    train.y = {"B"};
    train.label_set = {"A", "B", "C"};

    // Train zero epochs via a copy trick: take the initial weights, compute
    // a one-example analytic gradient by differencing one SGD step with lr=1
    // against the initial weights, then compare to finite differences.
    MlpModel init = mlp_train(train, 4, 0, 0.0, 3);
    const double lr = 1e-3;
    MlpModel stepped = mlp_train(train, 4, 1, lr, 3);

    auto loss_at = [&](const MlpModel& m) {
        Eigen::VectorXd p = mlp_probabilities(m, train.x.row(0));
        return -std::log(std::max(p[1], 1e-300));  // gold label "B"
    };

    const double step = 1e-6;
    double max_rel = 0.0;
    auto check_block = [&](const Eigen::MatrixXd& w0, const Eigen::MatrixXd& w1,
                           auto mutate) {
        for (Eigen::Index i = 0; i < w0.size(); ++i) {
            const double analytic = (w0.data()[i] - w1.data()[i]) / lr;  // gradient applied
            MlpModel up = init;
            MlpModel down = init;
            mutate(up, i, step);
            mutate(down, i, -step);
            const double numeric = (loss_at(up) - loss_at(down)) / (2.0 * step);
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
        }
    };
    check_block(init.w1, stepped.w1,
                [](MlpModel& m, Eigen::Index i, double d) { m.w1.data()[i] += d; });
    check_block(init.w2, stepped.w2,
                [](MlpModel& m, Eigen::Index i, double d) { m.w2.data()[i] += d; });
    check_block(init.b1, stepped.b1,
                [](MlpModel& m, Eigen::Index i, double d) { m.b1.data()[i] += d; });
    check_block(init.b2, stepped.b2,
                [](MlpModel& m, Eigen::Index i, double d) { m.b2.data()[i] += d; });
    CHECK(max_rel < 1e-6);
}

TEST_CASE("f1_report arithmetic") {
    std::vector<std::string> labels = {"A", "B"};

    SUBCASE("perfect predictions") {
        EvalReport r = f1_report({"A", "B", "A"}, {"A", "B", "A"}, labels);
        CHECK(r.macro_f1 == doctest::Approx(1.0));
    }
    SUBCASE("all wrong") {
        EvalReport r = f1_report({"B", "A"}, {"A", "B"}, labels);
        CHECK(r.macro_f1 == doctest::Approx(0.0));
    }
    SUBCASE("hand-computed confusion example") {
        EvalReport r = f1_report({"A", "B", "B", "B"}, {"A", "A", "B", "B"}, labels);
        CHECK(r.f1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(r.f1[1] == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(r.macro_f1 == doctest::Approx(0.73333333333333).epsilon(1e-9));
        // confusion row sums equal gold counts
        CHECK(r.confusion.row(0).sum() == 2);
        CHECK(r.confusion.row(1).sum() == 2);
    }
    SUBCASE("order invariance") {
        EvalReport a = f1_report({"A", "B", "B", "B"}, {"A", "A", "B", "B"}, labels);
        EvalReport b = f1_report({"B", "B", "A", "B"}, {"B", "A", "A", "B"}, labels);
        CHECK(a.macro_f1 == doctest::Approx(b.macro_f1).epsilon(1e-15));
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(f1_report({"A"}, {"A", "B"}, labels), ClassifyError);
    }
    SUBCASE("macro equals the mean of per-class F1") {
        EvalReport r = f1_report({"A", "A", "B", "A"}, {"A", "B", "B", "B"}, labels);
        CHECK(r.macro_f1 == doctest::Approx(0.5 * (r.f1[0] + r.f1[1])).epsilon(1e-15));
    }
}
