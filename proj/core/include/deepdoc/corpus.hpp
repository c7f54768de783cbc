#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <set>
#include <string>
#include <vector>

namespace deepdoc {

// One text file of the corpus after preprocessing. Ids are assigned in
// deterministic (class, filename) order so downstream artifacts never
// depend on filesystem paths.
struct Document {
    int id = -1;
    std::string raw_text;
    std::vector<std::string> tokens;  // lowercase, a-z only
    std::string label;
};

struct Corpus {
    std::vector<Document> documents;
    std::vector<std::string> labels;  // sorted, unique

    const Document& doc(int id) const { return documents.at(static_cast<size_t>(id)); }
    size_t size() const { return documents.size(); }
};

// Disjoint train/test/validation document-id lists covering the corpus.
struct SplitResult {
    std::vector<int> train;
    std::vector<int> test;
    std::vector<int> validation;
    std::uint64_t seed = 0;
};

struct Vocabulary {
    std::map<std::string, int> term_to_index;  // indices 0..V-1, no gaps
    std::vector<int> doc_freq;                 // indexed by term index
    int n_docs = 0;

    int size() const { return static_cast<int>(term_to_index.size()); }
    int index_of(const std::string& term) const {
        auto it = term_to_index.find(term);
        return it == term_to_index.end() ? -1 : it->second;
    }
};

// Lowercases and splits on every non-alphabetic character.
std::vector<std::string> preprocess(const std::string& raw_text);

// Loads a <root>/<class>/<file> tree. Throws CorpusError on a missing or
// empty root. Undecodable bytes are replaced when lossy_decode is true,
// otherwise the offending file path is reported.
Corpus load_corpus(const std::string& root_path, bool lossy_decode = true);

// Top max_terms terms ranked by document frequency (ties lexicographic),
// after removing stopwords. doc_ids restricts counting (pass the train
// split to fit on training documents only); empty means all documents.
Vocabulary build_vocabulary(const Corpus& corpus, int max_terms,
                            const std::set<std::string>& stopwords = {},
                            const std::vector<int>& doc_ids = {});

// Stratified split; per class, test and validation sizes are the rounded
// fractions and train takes the remainder.
SplitResult split(const Corpus& corpus, double train_frac, double test_frac,
                  double validation_frac, std::uint64_t seed);

// Fixed built-in English stop-word list.
const std::set<std::string>& english_stopwords();

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace deepdoc
