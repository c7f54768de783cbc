#include "deepdoc/config.hpp"

#include <fstream>
#include <sstream>

namespace deepdoc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::istringstream iss(value);
    std::string item;
    while (std::getline(iss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream iss(value);
    T out;
    iss >> out;
    if (iss.fail() || !iss.eof()) {
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + value + "'");
}

}  // namespace

void apply_override(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "corpus.root") c.corpus_root = value;
    else if (key == "corpus.train_frac") c.train_frac = parse_number<double>(key, value);
    else if (key == "corpus.test_frac") c.test_frac = parse_number<double>(key, value);
    else if (key == "corpus.validation_frac") c.validation_frac = parse_number<double>(key, value);
    else if (key == "corpus.split_seed") c.split_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "features.kinds") c.kinds = split_list(value);
    else if (key == "features.dim") c.dim = parse_number<int>(key, value);
    else if (key == "features.word_vectors") c.word_vectors_path = value;
    else if (key == "features.lda_iters") c.lda_iters = parse_number<int>(key, value);
    else if (key == "features.lda_fold_in_iters") c.lda_fold_in_iters = parse_number<int>(key, value);
    else if (key == "features.lda_alpha") c.lda_alpha = parse_number<double>(key, value);
    else if (key == "features.lda_beta") c.lda_beta = parse_number<double>(key, value);
    else if (key == "features.seed") c.feature_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "pairs.train_pairs") c.train_pairs = parse_number<long>(key, value);
    else if (key == "pairs.test_pairs") c.test_pairs = parse_number<long>(key, value);
    else if (key == "pairs.validation_pairs") c.validation_pairs = parse_number<long>(key, value);
    else if (key == "pairs.balance") c.balance = parse_number<double>(key, value);
    else if (key == "pairs.seed") c.pair_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "train.lr0") c.train.lr0 = parse_number<double>(key, value);
    else if (key == "train.s") c.train.s = parse_number<double>(key, value);
    else if (key == "train.epsilon") c.train.epsilon = parse_number<double>(key, value);
    else if (key == "train.dropout_p") c.train.dropout_p = parse_number<double>(key, value);
    else if (key == "train.init_range") c.train.init_range = parse_number<double>(key, value);
    else if (key == "train.use_biases") c.train.use_biases = parse_bool(key, value);
    else if (key == "train.max_iters") c.train.max_iters = parse_number<long>(key, value);
    else if (key == "train.eval_every") c.train.eval_every = parse_number<long>(key, value);
    else if (key == "train.patience") c.train.patience = parse_number<int>(key, value);
    else if (key == "train.seed") c.train.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "train.hidden_dim") c.hidden_dim = parse_number<int>(key, value);
    else if (key == "train.combo_dim") c.combo_dim = parse_number<int>(key, value);
    else if (key == "evaluate.knn_k") {
        c.knn_k.clear();
        for (const auto& item : split_list(value)) c.knn_k.push_back(parse_number<int>(key, item));
    }
    else if (key == "evaluate.svm_epochs") c.svm_epochs = parse_number<int>(key, value);
    else if (key == "evaluate.svm_reg") c.svm_reg = parse_number<double>(key, value);
    else if (key == "evaluate.dtree_max_depth") c.dtree_max_depth = parse_number<int>(key, value);
    else if (key == "evaluate.rf_trees") c.rf_trees = parse_number<int>(key, value);
    else if (key == "evaluate.mlp_hidden") c.mlp_hidden = parse_number<int>(key, value);
    else if (key == "evaluate.mlp_epochs") c.mlp_epochs = parse_number<int>(key, value);
    else if (key == "evaluate.mlp_lr") c.mlp_lr = parse_number<double>(key, value);
    else if (key == "evaluate.seed") c.eval_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "tsne.perplexity") c.tsne.perplexity = parse_number<double>(key, value);
    else if (key == "tsne.iters") c.tsne.iters = parse_number<int>(key, value);
    else if (key == "tsne.learning_rate") c.tsne.learning_rate = parse_number<double>(key, value);
    else if (key == "tsne.seed") c.tsne.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "output.dir") c.output_dir = value;
    else throw ConfigError("unknown config key: " + key);
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    PipelineConfig config;
    std::string line;
    std::string section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + " of " + path +
                              " is not `key = value`");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && key.find('.') == std::string::npos) {
            key = section + "." + key;
        }
        apply_override(config, key, value);
    }
    return config;
}

}  // namespace deepdoc
