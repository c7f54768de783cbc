// Microbenchmarks for the hot paths: featurization, Siamese forward/backward,
// and the t-SNE probability computation.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "deepdoc/features.hpp"
#include "deepdoc/siamese.hpp"
#include "deepdoc/tsne.hpp"

namespace {

deepdoc::Corpus synthetic_corpus(int n_docs, int words_per_doc, int vocab_size,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, vocab_size - 1);
    deepdoc::Corpus corpus;
    for (int d = 0; d < n_docs; ++d) {
        deepdoc::Document doc;
        doc.id = d;
        doc.label = d % 2 ? "a" : "b";
        for (int w = 0; w < words_per_doc; ++w) {
            int t = pick(rng);
            std::string term = "w";
            term += static_cast<char>('a' + t / 26 % 26);
            term += static_cast<char>('a' + t % 26);
            doc.tokens.push_back(term);
        }
        corpus.documents.push_back(std::move(doc));
    }
    corpus.labels = {"a", "b"};
    return corpus;
}

std::vector<int> ids_of(const deepdoc::Corpus& corpus) {
    std::vector<int> ids(corpus.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ids;
}

void bm_tfidf_transform(benchmark::State& state) {
    deepdoc::Corpus corpus = synthetic_corpus(200, 150, 400, 1);
    deepdoc::Vocabulary vocab = deepdoc::build_vocabulary(corpus, 400);
    deepdoc::TfidfModel model = deepdoc::tfidf_fit(corpus, ids_of(corpus), vocab);
    for (auto _ : state) {
        benchmark::DoNotOptimize(deepdoc::tfidf_transform(model, corpus.doc(0).tokens));
    }
}
BENCHMARK(bm_tfidf_transform);

void bm_siamese_forward(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    deepdoc::TrainConfig config;
    config.seed = 3;
    deepdoc::SiameseParams params = deepdoc::init_params(d, d, d, config);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    deepdoc::DocVector xa(d), xb(d);
    for (int i = 0; i < d; ++i) {
        xa[i] = gauss(rng);
        xb[i] = gauss(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(deepdoc::forward(params, xa, xb, 0.1).score);
    }
}
BENCHMARK(bm_siamese_forward)->Arg(50)->Arg(200);

void bm_siamese_backward(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    deepdoc::TrainConfig config;
    config.seed = 3;
    deepdoc::SiameseParams params = deepdoc::init_params(d, d, d, config);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    deepdoc::DocVector xa(d), xb(d);
    for (int i = 0; i < d; ++i) {
        xa[i] = gauss(rng);
        xb[i] = gauss(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(deepdoc::backward(params, xa, xb, 1.0, 0.1));
    }
}
BENCHMARK(bm_siamese_backward)->Arg(50)->Arg(200);

void bm_tsne_joint_probabilities(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd x(n, 16);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(deepdoc::tsne_joint_probabilities(x, 20.0));
    }
}
BENCHMARK(bm_tsne_joint_probabilities)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
