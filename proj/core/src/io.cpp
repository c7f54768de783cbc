#include "deepdoc/io.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace deepdoc {

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void save_split(const SplitResult& split, const std::string& path) {
    json j;
    j["seed"] = split.seed;
    j["train"] = split.train;
    j["test"] = split.test;
    j["validation"] = split.validation;
    write_text(path, j.dump(2) + "\n");
}

SplitResult load_split(const std::string& path) {
    json j = read_json(path);
    SplitResult split;
    split.seed = j.at("seed").get<std::uint64_t>();
    split.train = j.at("train").get<std::vector<int>>();
    split.test = j.at("test").get<std::vector<int>>();
    split.validation = j.at("validation").get<std::vector<int>>();
    return split;
}

void save_features(const FeatureMatrix& m, const std::string& csv_path) {
    std::ostringstream out;
    out << "doc_id";
    for (int c = 0; c < m.dim(); ++c) out << ",v" << c;
    out << '\n';
    for (int i = 0; i < m.n(); ++i) {
        out << m.doc_ids[static_cast<size_t>(i)];
        for (int c = 0; c < m.dim(); ++c) out << ',' << format_double(m.rows(i, c));
        out << '\n';
    }
    write_text(csv_path, out.str());

    json meta;
    meta["kind"] = m.kind;
    meta["dim"] = m.dim();
    meta["split_seed"] = m.split_seed;
    write_text(csv_path + ".meta.json", meta.dump(2) + "\n");
}

FeatureMatrix load_features(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path);

    std::string line;
    if (!std::getline(in, line)) throw IoError("empty feature file: " + csv_path);
    int dim = 0;
    for (char c : line) {
        if (c == ',') ++dim;
    }

    FeatureMatrix m;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        m.doc_ids.push_back(std::stoi(field));
        std::vector<double> values;
        while (std::getline(row, field, ',')) values.push_back(std::stod(field));
        if (static_cast<int>(values.size()) != dim) {
            throw IoError("inconsistent row width in " + csv_path);
        }
        rows.push_back(std::move(values));
    }
    m.rows.resize(static_cast<Eigen::Index>(rows.size()), dim);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < dim; ++c) m.rows(static_cast<Eigen::Index>(i), c) = rows[i][static_cast<size_t>(c)];
    }

    json meta = read_json(csv_path + ".meta.json");
    m.kind = meta.at("kind").get<std::string>();
    m.split_seed = meta.at("split_seed").get<std::uint64_t>();
    return m;
}

void save_pairs(const PairSet& pairs, const std::string& csv_path) {
    std::ostringstream out;
    out << "a_id,b_id,relevancy\n";
    for (const auto& pair : pairs.pairs) {
        out << pair.a_id << ',' << pair.b_id << ',' << pair.relevancy << '\n';
    }
    write_text(csv_path, out.str());

    json meta;
    meta["seed"] = pairs.seed;
    meta["balance"] = pairs.balance;
    meta["source_split"] = pairs.source_split;
    meta["count"] = pairs.pairs.size();
    write_text(csv_path + ".meta.json", meta.dump(2) + "\n");
}

PairSet load_pairs(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open " + csv_path);

    PairSet set;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        DocumentPair pair;
        std::getline(row, field, ',');
        pair.a_id = std::stoi(field);
        std::getline(row, field, ',');
        pair.b_id = std::stoi(field);
        std::getline(row, field, ',');
        pair.relevancy = std::stod(field);
        set.pairs.push_back(pair);
    }

    json meta = read_json(csv_path + ".meta.json");
    set.seed = meta.at("seed").get<std::uint64_t>();
    set.balance = meta.at("balance").get<double>();
    set.source_split = meta.at("source_split").get<std::string>();
    return set;
}

namespace {

void write_block(std::ostream& out, const double* data, size_t count) {
    // Little-endian platform assumed (x86-64 / aarch64); documented format.
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
}

void read_block(std::istream& in, double* data, size_t count) {
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw IoError("truncated model file");
}

}  // namespace

void save_model(const SiameseParams& params, const TrainConfig& config,
                const std::string& path) {
    json header;
    header["format"] = "deepdoc-model-v1";
    header["input_dim"] = params.input_dim();
    header["hidden_dim"] = params.hidden_dim();
    header["combo_dim"] = params.combo_dim();
    header["subnet_activation"] = "lrelu";
    header["combination_activation"] = "lrelu";
    header["output_activation"] = "tanh";
    header["config"] = {{"lr0", config.lr0},
                        {"s", config.s},
                        {"epsilon", config.epsilon},
                        {"dropout_p", config.dropout_p},
                        {"init_range", config.init_range},
                        {"use_biases", config.use_biases},
                        {"max_iters", config.max_iters},
                        {"eval_every", config.eval_every},
                        {"patience", config.patience},
                        {"seed", config.seed}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << header.dump() << '\n';
    write_block(out, params.w1.data(), static_cast<size_t>(params.w1.size()));
    write_block(out, params.b1.data(), static_cast<size_t>(params.b1.size()));
    write_block(out, params.w21.data(), static_cast<size_t>(params.w21.size()));
    write_block(out, params.b21.data(), static_cast<size_t>(params.b21.size()));
    write_block(out, params.w22.data(), static_cast<size_t>(params.w22.size()));
    write_block(out, &params.b22, 1);
    if (!out) throw IoError("write failed for " + path);
}

std::pair<SiameseParams, TrainConfig> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string header_line;
    if (!std::getline(in, header_line)) throw IoError("missing model header in " + path);
    json header;
    try {
        header = json::parse(header_line);
    } catch (const json::exception& e) {
        throw IoError("malformed model header in " + path + ": " + e.what());
    }
    if (header.value("format", "") != "deepdoc-model-v1") {
        throw IoError("unknown model format in " + path);
    }

    const int d = header.at("input_dim").get<int>();
    const int h = header.at("hidden_dim").get<int>();
    const int c = header.at("combo_dim").get<int>();

    SiameseParams params;
    params.w1.resize(h, d);
    params.b1.resize(h);
    params.w21.resize(c, 2 * h);
    params.b21.resize(c);
    params.w22.resize(c);
    read_block(in, params.w1.data(), static_cast<size_t>(params.w1.size()));
    read_block(in, params.b1.data(), static_cast<size_t>(params.b1.size()));
    read_block(in, params.w21.data(), static_cast<size_t>(params.w21.size()));
    read_block(in, params.b21.data(), static_cast<size_t>(params.b21.size()));
    read_block(in, params.w22.data(), static_cast<size_t>(params.w22.size()));
    read_block(in, &params.b22, 1);

    TrainConfig config;
    const json& jc = header.at("config");
    config.lr0 = jc.at("lr0").get<double>();
    config.s = jc.at("s").get<double>();
    config.epsilon = jc.at("epsilon").get<double>();
    config.dropout_p = jc.at("dropout_p").get<double>();
    config.init_range = jc.at("init_range").get<double>();
    config.use_biases = jc.at("use_biases").get<bool>();
    config.max_iters = jc.at("max_iters").get<long>();
    config.eval_every = jc.at("eval_every").get<long>();
    config.patience = jc.at("patience").get<int>();
    config.seed = jc.at("seed").get<std::uint64_t>();
    return {std::move(params), config};
}

void save_trace(const TrainTrace& trace, const std::string& csv_path) {
    std::ostringstream out;
    out << "iteration,train_mse,validation_mse,learning_rate\n";
    out.precision(17);
    for (const auto& record : trace.records) {
        out << record.iteration << ',' << record.train_mse << ','
            << record.validation_mse << ',' << record.learning_rate << '\n';
    }
    out << "# stopping_reason=" << trace.stopping_reason
        << " best_iteration=" << trace.best_iteration
        << " best_validation_mse=" << trace.best_validation_mse << '\n';
    write_text(csv_path, out.str());
}

void save_report(const EvalReport& report, const std::string& path) {
    json j;
    j["macro_f1"] = report.macro_f1;
    j["micro_f1"] = report.micro_f1;
    json per_class = json::object();
    for (size_t c = 0; c < report.labels.size(); ++c) {
        per_class[report.labels[c]] = {{"precision", report.precision[c]},
                                       {"recall", report.recall[c]},
                                       {"f1", report.f1[c]}};
    }
    j["per_class"] = per_class;
    std::vector<std::vector<int>> confusion;
    for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
        std::vector<int> row;
        for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) {
            row.push_back(report.confusion(r, c));
        }
        confusion.push_back(std::move(row));
    }
    j["confusion"] = confusion;
    j["labels"] = report.labels;
    write_text(path, j.dump(2) + "\n");
}

std::string sweep_csv_header() { return "representation,dim,classifier,param,macro_f1"; }

std::string sweep_csv_row(const std::string& representation, int dim,
                          const std::string& classifier, const std::string& param,
                          double macro_f1) {
    std::ostringstream os;
    os.precision(17);
    os << representation << ',' << dim << ',' << classifier << ',' << param << ','
       << macro_f1;
    return os.str();
}

}  // namespace deepdoc
