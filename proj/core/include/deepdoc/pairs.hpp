#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "deepdoc/corpus.hpp"

namespace deepdoc {

// Ordered document pair with a binary relevancy target: 1.0 when both
// documents share a topic label, 0.0 otherwise.
struct DocumentPair {
    int a_id = -1;
    int b_id = -1;
    double relevancy = 0.0;
};

struct PairSet {
    std::vector<DocumentPair> pairs;
    std::string source_split;  // train | test | validation
    std::uint64_t seed = 0;
    double balance = 0.5;
};

struct PairError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Samples round(balance * n_pairs) same-label pairs uniformly (with
// replacement across draws) and the remainder from different-label pairs.
// Ordered pairs; self-pairs excluded unless allow_self.
PairSet generate_pairs(const Corpus& corpus, const std::vector<int>& split_ids,
                       const std::string& split_name, long n_pairs, double balance,
                       std::uint64_t seed, bool allow_self = false);

}  // namespace deepdoc
