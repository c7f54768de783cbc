#include "deepdoc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace deepdoc {

std::vector<std::string> preprocess(const std::string& raw_text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : raw_text) {
        if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (c >= 'a' && c <= 'z') {
            current.push_back(static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

namespace {

std::string read_file(const fs::path& path, bool lossy_decode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // Only the a-z/A-Z bytes survive preprocessing, so any byte sequence is
    // decodable in the lossy sense. Strict mode rejects invalid UTF-8.
    if (!lossy_decode) {
        size_t i = 0;
        const auto* s = reinterpret_cast<const unsigned char*>(text.data());
        while (i < text.size()) {
            unsigned char c = s[i];
            size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3
                       : (c >> 3) == 0x1E ? 4 : 0;
            if (len == 0 || i + len > text.size()) {
                throw CorpusError("invalid UTF-8 in file: " + path.string());
            }
            for (size_t k = 1; k < len; ++k) {
                if ((s[i + k] >> 6) != 0x2) {
                    throw CorpusError("invalid UTF-8 in file: " + path.string());
                }
            }
            i += len;
        }
    }
    return text;
}

}  // namespace

Corpus load_corpus(const std::string& root_path, bool lossy_decode) {
    fs::path root(root_path);
    if (!fs::is_directory(root)) {
        throw CorpusError("corpus root is not a directory: " + root_path);
    }

    std::vector<std::string> classes;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) classes.push_back(entry.path().filename().string());
    }
    std::sort(classes.begin(), classes.end());
    if (classes.empty()) {
        throw CorpusError("corpus root has no class directories: " + root_path);
    }

    Corpus corpus;
    for (const auto& cls : classes) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(root / cls)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            Document doc;
            doc.id = static_cast<int>(corpus.documents.size());
            doc.raw_text = read_file(file, lossy_decode);
            doc.tokens = preprocess(doc.raw_text);
            doc.label = cls;
            corpus.documents.push_back(std::move(doc));
        }
    }
    if (corpus.documents.empty()) {
        throw CorpusError("corpus contains no documents: " + root_path);
    }
    corpus.labels = classes;
    return corpus;
}

Vocabulary build_vocabulary(const Corpus& corpus, int max_terms,
                            const std::set<std::string>& stopwords,
                            const std::vector<int>& doc_ids) {
    if (max_terms < 1) throw CorpusError("max_terms must be >= 1");

    std::vector<int> ids = doc_ids;
    if (ids.empty()) {
        ids.resize(corpus.size());
        std::iota(ids.begin(), ids.end(), 0);
    }

    std::map<std::string, int> df;
    for (int id : ids) {
        std::set<std::string> seen(corpus.doc(id).tokens.begin(),
                                   corpus.doc(id).tokens.end());
        for (const auto& term : seen) {
            if (!stopwords.count(term)) ++df[term];
        }
    }
    if (df.empty()) throw CorpusError("corpus has no tokens to build a vocabulary from");

    // Rank by df descending, ties lexicographic ascending.
    std::vector<std::pair<std::string, int>> ranked(df.begin(), df.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(ranked.size()) > max_terms) ranked.resize(static_cast<size_t>(max_terms));

    // Column indices in lexicographic term order for stable matrices.
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    Vocabulary vocab;
    vocab.n_docs = static_cast<int>(ids.size());
    vocab.doc_freq.reserve(ranked.size());
    for (const auto& [term, count] : ranked) {
        vocab.term_to_index.emplace(term, static_cast<int>(vocab.doc_freq.size()));
        vocab.doc_freq.push_back(count);
    }
    return vocab;
}

SplitResult split(const Corpus& corpus, double train_frac, double test_frac,
                  double validation_frac, std::uint64_t seed) {
    auto in_open_unit = [](double f) { return f > 0.0 && f < 1.0; };
    if (!in_open_unit(train_frac) || !in_open_unit(test_frac) || !in_open_unit(validation_frac)) {
        throw CorpusError("split fractions must each lie in (0,1)");
    }
    if (std::abs(train_frac + test_frac + validation_frac - 1.0) > 1e-9) {
        throw CorpusError("split fractions must sum to 1");
    }

    std::map<std::string, std::vector<int>> by_label;
    for (const auto& doc : corpus.documents) by_label[doc.label].push_back(doc.id);

    SplitResult result;
    result.seed = seed;
    std::mt19937_64 rng(seed);
    for (auto& [label, ids] : by_label) {
        if (ids.size() < 3) {
            throw CorpusError("class '" + label + "' has too few documents to split");
        }
        std::shuffle(ids.begin(), ids.end(), rng);
        const auto n = static_cast<long>(ids.size());
        auto n_test = static_cast<long>(std::llround(test_frac * static_cast<double>(n)));
        auto n_val = static_cast<long>(std::llround(validation_frac * static_cast<double>(n)));
        n_test = std::max(1L, std::min(n_test, n - 2));
        n_val = std::max(1L, std::min(n_val, n - n_test - 1));
        const long n_train = n - n_test - n_val;
        result.train.insert(result.train.end(), ids.begin(), ids.begin() + n_train);
        result.test.insert(result.test.end(), ids.begin() + n_train, ids.begin() + n_train + n_test);
        result.validation.insert(result.validation.end(), ids.begin() + n_train + n_test, ids.end());
    }
    std::sort(result.train.begin(), result.train.end());
    std::sort(result.test.begin(), result.test.end());
    std::sort(result.validation.begin(), result.validation.end());
    return result;
}

const std::set<std::string>& english_stopwords() {
    static const std::set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an",
        "and", "any", "are", "as", "at", "be", "because", "been", "before",
        "being", "below", "between", "both", "but", "by", "can", "cannot",
        "could", "did", "do", "does", "doing", "down", "during", "each", "few",
        "for", "from", "further", "had", "has", "have", "having", "he", "her",
        "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
        "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most",
        "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
        "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
        "same", "she", "should", "so", "some", "such", "than", "that", "the",
        "their", "theirs", "them", "themselves", "then", "there", "these",
        "they", "this", "those", "through", "to", "too", "under", "until", "up",
        "very", "was", "we", "were", "what", "when", "where", "which", "while",
        "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
        "yourself", "yourselves"};
    return words;
}

}  // namespace deepdoc
