// Pipeline driver: corpus preparation, featurization, pair generation,
// Siamese training, embedding export, classifier evaluation, and t-SNE
// projection. Every stage reads and writes files under the configured
// output directory so stages can be rerun independently.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "deepdoc/classify.hpp"
#include "deepdoc/config.hpp"
#include "deepdoc/io.hpp"
#include "deepdoc/lda.hpp"
#include "deepdoc/tsne.hpp"

namespace fs = std::filesystem;
using namespace deepdoc;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Stage {
    PipelineConfig config;
    fs::path out;

    fs::path path(const std::string& name) const { return out / name; }
    std::string feature_file(const std::string& kind) const {
        return (out / ("features_" + kind + ".csv")).string();
    }
    std::string deep_feature_file(const std::string& kind) const {
        return (out / ("features_deep_" + kind + ".csv")).string();
    }
};

Stage make_stage(const PipelineConfig& config) {
    Stage stage{config, fs::path(config.output_dir)};
    fs::create_directories(stage.out);
    return stage;
}

// Every artifact gets a config echo so reruns are auditable.
void write_config_echo(const Stage& stage, const std::string& stage_name,
                       const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(stage.path(stage_name + ".config.txt"));
    for (const auto& [key, value] : kv) out << key << " = " << value << "\n";
}

Corpus load_prepared_corpus(const Stage& stage) {
    return load_corpus(stage.config.corpus_root);
}

std::vector<int> split_ids(const SplitResult& split, const std::string& name) {
    if (name == "train") return split.train;
    if (name == "test") return split.test;
    if (name == "validation") return split.validation;
    throw ConfigError("unknown split: " + name);
}

void cmd_prepare(const Stage& stage) {
    Corpus corpus = load_prepared_corpus(stage);
    SplitResult result = split(corpus, stage.config.train_frac, stage.config.test_frac,
                               stage.config.validation_frac, stage.config.split_seed);
    save_split(result, stage.path("split.json").string());
    std::cout << "prepare: " << corpus.size() << " documents, "
              << corpus.labels.size() << " labels; split "
              << result.train.size() << "/" << result.test.size() << "/"
              << result.validation.size() << " -> " << stage.path("split.json") << "\n";
    write_config_echo(stage, "prepare",
                      {{"corpus.root", stage.config.corpus_root},
                       {"corpus.split_seed", std::to_string(stage.config.split_seed)}});
}

std::vector<int> all_split_ids(const SplitResult& split) {
    std::vector<int> ids = split.train;
    ids.insert(ids.end(), split.test.begin(), split.test.end());
    ids.insert(ids.end(), split.validation.begin(), split.validation.end());
    return ids;
}

void cmd_featurize(const Stage& stage) {
    Corpus corpus = load_prepared_corpus(stage);
    SplitResult sp = load_split(stage.path("split.json").string());
    std::vector<int> every_id = all_split_ids(sp);

    for (const auto& kind : stage.config.kinds) {
        FeatureMatrix m;
        if (kind == "tfidf") {
            Vocabulary vocab = build_vocabulary(corpus, stage.config.dim, {}, sp.train);
            TfidfModel model = tfidf_fit(corpus, sp.train, vocab);
            m = tfidf_matrix(model, corpus, every_id);
        } else if (kind == "lsa") {
            Vocabulary vocab = build_vocabulary(corpus, 1 << 30, {}, sp.train);
            TfidfModel model = tfidf_fit(corpus, sp.train, vocab);
            FeatureMatrix train_m = tfidf_matrix(model, corpus, sp.train);
            LsaModel lsa = lsa_fit(model, train_m.rows, stage.config.dim);
            m = lsa_matrix(lsa, corpus, every_id);
        } else if (kind == "lda") {
            Vocabulary vocab = build_vocabulary(corpus, 1 << 30, {}, sp.train);
            LdaModel lda = lda_fit(corpus, sp.train, vocab, stage.config.dim,
                                   stage.config.lda_alpha, stage.config.lda_beta,
                                   stage.config.lda_iters, stage.config.feature_seed);
            m = lda_matrix(lda, corpus, every_id, stage.config.lda_fold_in_iters,
                           stage.config.feature_seed);
        } else if (kind == "avg") {
            if (stage.config.word_vectors_path.empty()) {
                throw ConfigError("features.word_vectors is required for kind=avg");
            }
            EmbeddingTable table = load_word_vectors(stage.config.word_vectors_path);
            m = average_matrix(table, corpus, every_id, english_stopwords());
        } else {
            throw ConfigError("unknown feature kind: " + kind);
        }
        m.split_seed = sp.seed;
        save_features(m, stage.feature_file(kind));
        std::cout << "featurize: " << kind << " " << m.n() << "x" << m.dim() << " -> "
                  << stage.feature_file(kind) << "\n";
    }
}

void cmd_pairs(const Stage& stage) {
    Corpus corpus = load_prepared_corpus(stage);
    SplitResult sp = load_split(stage.path("split.json").string());
    const std::vector<std::tuple<std::string, std::vector<int>, long>> jobs = {
        {"train", sp.train, stage.config.train_pairs},
        {"test", sp.test, stage.config.test_pairs},
        {"validation", sp.validation, stage.config.validation_pairs},
    };
    for (const auto& [name, ids, count] : jobs) {
        PairSet set = generate_pairs(corpus, ids, name, count, stage.config.balance,
                                     stage.config.pair_seed);
        save_pairs(set, stage.path("pairs_" + name + ".csv").string());
        std::cout << "pairs: " << name << " " << set.pairs.size() << " -> "
                  << stage.path("pairs_" + name + ".csv") << "\n";
    }
}

void cmd_train(const Stage& stage) {
    for (const auto& kind : stage.config.kinds) {
        FeatureMatrix features = load_features(stage.feature_file(kind));
        PairSet train_pairs = load_pairs(stage.path("pairs_train.csv").string());
        PairSet val_pairs = load_pairs(stage.path("pairs_validation.csv").string());

        int hidden = stage.config.hidden_dim > 0 ? stage.config.hidden_dim : features.dim();
        int combo = stage.config.combo_dim > 0 ? stage.config.combo_dim : hidden;
        auto [params, trace] = train(train_pairs, features, val_pairs,
                                     stage.config.train, hidden, combo);
        save_model(params, stage.config.train,
                   stage.path("model_" + kind + ".bin").string());
        save_trace(trace, stage.path("trace_" + kind + ".csv").string());
        std::cout << "train: " << kind << " stopped by " << trace.stopping_reason
                  << " at best iteration " << trace.best_iteration
                  << " (validation MSE " << trace.best_validation_mse << ")\n";
    }
}

void cmd_embed(const Stage& stage) {
    for (const auto& kind : stage.config.kinds) {
        FeatureMatrix features = load_features(stage.feature_file(kind));
        auto [params, config] = load_model(stage.path("model_" + kind + ".bin").string());
        FeatureMatrix deep = embed(params, features, config.epsilon);
        deep.kind = "deep_" + kind;
        save_features(deep, stage.deep_feature_file(kind));
        std::cout << "embed: " << kind << " -> " << stage.deep_feature_file(kind) << "\n";
    }
}

FeatureMatrix subset_rows(const FeatureMatrix& m, const std::vector<int>& ids) {
    FeatureMatrix out;
    out.kind = m.kind;
    out.split_seed = m.split_seed;
    out.doc_ids = ids;
    out.rows.resize(static_cast<Eigen::Index>(ids.size()), m.rows.cols());
    for (size_t i = 0; i < ids.size(); ++i) {
        out.rows.row(static_cast<Eigen::Index>(i)) = m.rows.row(m.row_of(ids[i]));
    }
    return out;
}

void evaluate_one(const Stage& stage, std::ofstream& sweep, const Corpus& corpus,
                  const SplitResult& sp, const std::string& name,
                  const FeatureMatrix& features) {
    LabeledDataset train_ds = make_dataset(subset_rows(features, sp.train), corpus);
    FeatureMatrix test_m = subset_rows(features, sp.test);
    LabeledDataset test_ds = make_dataset(test_m, corpus);
    const int dim = features.dim();

    auto evaluate_preds = [&](const std::string& classifier, const std::string& param,
                              const std::vector<std::string>& preds) {
        EvalReport report = f1_report(preds, test_ds.y, corpus.labels);
        sweep << sweep_csv_row(name, dim, classifier, param, report.macro_f1) << "\n";
        save_report(report, stage.path("report_" + name + "_" + classifier +
                                       (param.empty() ? "" : "_" + param) + ".json")
                                .string());
        std::cout << "evaluate: " << name << " dim=" << dim << " " << classifier
                  << (param.empty() ? "" : " " + param) << " macro-F1 "
                  << report.macro_f1 << "\n";
    };

    for (int k : stage.config.knn_k) {
        std::vector<std::string> preds;
        preds.reserve(test_ds.y.size());
        for (Eigen::Index i = 0; i < test_m.rows.rows(); ++i) {
            preds.push_back(knn_predict(train_ds, test_m.rows.row(i), k));
        }
        evaluate_preds("knn", "k" + std::to_string(k), preds);
    }

    SvmModel svm = svm_train(train_ds, stage.config.svm_epochs, stage.config.svm_reg,
                             stage.config.eval_seed);
    std::vector<std::string> preds;
    for (Eigen::Index i = 0; i < test_m.rows.rows(); ++i) {
        preds.push_back(svm_predict(svm, test_m.rows.row(i)));
    }
    evaluate_preds("svm", "", preds);

    DTreeModel dtree = dtree_train(train_ds, stage.config.dtree_max_depth, 1,
                                   stage.config.eval_seed);
    preds.clear();
    for (Eigen::Index i = 0; i < test_m.rows.rows(); ++i) {
        preds.push_back(dtree_predict(dtree, test_m.rows.row(i)));
    }
    evaluate_preds("dtree", "", preds);

    RForestModel forest = rforest_train(train_ds, stage.config.rf_trees, 0.0,
                                        stage.config.eval_seed);
    preds.clear();
    for (Eigen::Index i = 0; i < test_m.rows.rows(); ++i) {
        preds.push_back(rforest_predict(forest, test_m.rows.row(i)));
    }
    evaluate_preds("rforest", "", preds);

    MlpModel mlp = mlp_train(train_ds, stage.config.mlp_hidden, stage.config.mlp_epochs,
                             stage.config.mlp_lr, stage.config.eval_seed);
    preds.clear();
    for (Eigen::Index i = 0; i < test_m.rows.rows(); ++i) {
        preds.push_back(mlp_predict(mlp, test_m.rows.row(i)));
    }
    evaluate_preds("mlp", "", preds);
}

void cmd_evaluate(const Stage& stage) {
    Corpus corpus = load_prepared_corpus(stage);
    SplitResult sp = load_split(stage.path("split.json").string());

    std::ofstream sweep(stage.path("sweep.csv"));
    sweep << sweep_csv_header() << "\n";
    for (const auto& kind : stage.config.kinds) {
        FeatureMatrix features = load_features(stage.feature_file(kind));
        evaluate_one(stage, sweep, corpus, sp, kind, features);

        const std::string deep_file = stage.deep_feature_file(kind);
        if (fs::exists(deep_file)) {
            FeatureMatrix deep = load_features(deep_file);
            evaluate_one(stage, sweep, corpus, sp, "deep_" + kind, deep);
        } else {
            std::cerr << "evaluate: no trained model for " << kind
                      << ", skipping deep_" << kind << " rows\n";
        }
    }
    std::cout << "evaluate: sweep -> " << stage.path("sweep.csv") << "\n";
}

void cmd_tsne(const Stage& stage) {
    Corpus corpus = load_prepared_corpus(stage);
    SplitResult sp = load_split(stage.path("split.json").string());

    std::vector<std::string> names;
    for (const auto& kind : stage.config.kinds) {
        names.push_back(kind);
        if (fs::exists(stage.deep_feature_file(kind))) names.push_back("deep_" + kind);
    }
    for (const auto& name : names) {
        const std::string file = name.rfind("deep_", 0) == 0
                                     ? stage.deep_feature_file(name.substr(5))
                                     : stage.feature_file(name);
        FeatureMatrix features = load_features(file);
        FeatureMatrix test_m = subset_rows(features, sp.test);

        TsneResult result = tsne(test_m.rows, stage.config.tsne);
        std::vector<std::string> labels;
        for (int id : test_m.doc_ids) labels.push_back(corpus.doc(id).label);
        export_scatter(result.coords, test_m.doc_ids, labels,
                       stage.path("tsne_" + name + ".csv").string(),
                       stage.path("tsne_" + name + ".svg").string());
        std::cout << "tsne: " << name << " KL " << result.initial_kl << " -> "
                  << result.final_kl << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Document-embedding pipeline: conventional representations, "
                 "Siamese relevancy training, classification, t-SNE"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    long long seed_override = -1;
    app.add_option("-c,--config", config_path, "Pipeline config file (key = value sections)")
        ->required();
    app.add_option("-D,--define", overrides,
                   "Override a config key, e.g. -D features.dim=100");
    app.add_option("--seed", seed_override, "Override every stage seed at once");

    auto* prepare = app.add_subcommand("prepare", "Load corpus, write split manifest");
    auto* featurize = app.add_subcommand("featurize", "Build feature matrices");
    auto* pairs = app.add_subcommand("pairs", "Generate labeled document pairs");
    auto* train = app.add_subcommand("train", "Train the Siamese network");
    auto* embed = app.add_subcommand("embed", "Export deep document representations");
    auto* evaluate = app.add_subcommand("evaluate", "Run the classifier grid");
    auto* tsne_cmd = app.add_subcommand("tsne", "Project test documents to 2-D");
    auto* all = app.add_subcommand("all", "Run every stage in order");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig config = load_config(config_path);
        if (const char* cache = std::getenv("DEEPDOC_CACHE_DIR");
            cache != nullptr && config.corpus_root.empty()) {
            config.corpus_root = cache;
        }
        for (const auto& item : overrides) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                std::cerr << "bad --define, expected key=value: " << item << "\n";
                return kExitUsage;
            }
            apply_override(config, item.substr(0, eq), item.substr(eq + 1));
        }
        if (seed_override >= 0) {
            const auto seed = static_cast<std::uint64_t>(seed_override);
            config.split_seed = seed;
            config.feature_seed = seed;
            config.pair_seed = seed;
            config.train.seed = seed;
            config.eval_seed = seed;
            config.tsne.seed = seed;
        }

        Stage stage = make_stage(config);
        if (prepare->parsed() || all->parsed()) cmd_prepare(stage);
        if (featurize->parsed() || all->parsed()) cmd_featurize(stage);
        if (pairs->parsed() || all->parsed()) cmd_pairs(stage);
        if (train->parsed() || all->parsed()) cmd_train(stage);
        if (embed->parsed() || all->parsed()) cmd_embed(stage);
        if (evaluate->parsed() || all->parsed()) cmd_evaluate(stage);
        if (tsne_cmd->parsed() || all->parsed()) cmd_tsne(stage);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CorpusError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const PairError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const IoError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const FeatureError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const SiameseError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ClassifyError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const TsneError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
