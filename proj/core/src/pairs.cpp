#include "deepdoc/pairs.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <random>

namespace deepdoc {

PairSet generate_pairs(const Corpus& corpus, const std::vector<int>& split_ids,
                       const std::string& split_name, long n_pairs, double balance,
                       std::uint64_t seed, bool allow_self) {
    if (n_pairs < 1) throw PairError("n_pairs must be >= 1");
    if (balance <= 0.0 || balance >= 1.0) throw PairError("balance must lie in (0,1)");
    if (split_ids.size() < 2) throw PairError("split needs at least 2 documents");

    std::map<std::string, long> label_counts;
    for (int id : split_ids) ++label_counts[corpus.doc(id).label];
    if (label_counts.size() < 2) throw PairError("split needs at least 2 labels");

    bool any_relevant_source = false;
    for (const auto& [label, count] : label_counts) {
        if (count >= 2 || allow_self) {
            any_relevant_source = true;
        } else {
            std::cerr << "generate_pairs: label '" << label
                      << "' has a single document, relevant pairs come from other labels\n";
        }
    }
    if (!any_relevant_source) throw PairError("no label can produce a relevant pair");

    const long n_relevant = std::lround(balance * static_cast<double>(n_pairs));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, split_ids.size() - 1);

    PairSet set;
    set.source_split = split_name;
    set.seed = seed;
    set.balance = balance;
    set.pairs.reserve(static_cast<size_t>(n_pairs));

    // Rejection sampling keeps draws uniform over the ordered pair set.
    auto draw = [&](bool want_relevant) {
        for (;;) {
            int a = split_ids[pick(rng)];
            int b = split_ids[pick(rng)];
            if (a == b && !allow_self) continue;
            bool same = corpus.doc(a).label == corpus.doc(b).label;
            if (same == want_relevant) {
                return DocumentPair{a, b, want_relevant ? 1.0 : 0.0};
            }
        }
    };

    for (long i = 0; i < n_relevant; ++i) set.pairs.push_back(draw(true));
    for (long i = n_relevant; i < n_pairs; ++i) set.pairs.push_back(draw(false));
    return set;
}

}  // namespace deepdoc
