#pragma once

#include <stdexcept>
#include <string>

#include "deepdoc/classify.hpp"
#include "deepdoc/corpus.hpp"
#include "deepdoc/features.hpp"
#include "deepdoc/pairs.hpp"
#include "deepdoc/siamese.hpp"

namespace deepdoc {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Split manifest: {"seed": int, "train": [ids], "test": [ids], "validation": [ids]}
void save_split(const SplitResult& split, const std::string& path);
SplitResult load_split(const std::string& path);

// Feature matrices: CSV `doc_id,v0,...,v{D-1}` plus a JSON sidecar
// `<path>.meta.json` with {"kind", "dim", "split_seed"}.
void save_features(const FeatureMatrix& m, const std::string& csv_path);
FeatureMatrix load_features(const std::string& csv_path);

// Pair sets: CSV `a_id,b_id,relevancy` plus a JSON sidecar recording
// seed, balance, and source split.
void save_pairs(const PairSet& pairs, const std::string& csv_path);
PairSet load_pairs(const std::string& csv_path);

// Model file: one-line JSON header (dims, activation config, seed echo)
// followed by the parameter blocks as little-endian 64-bit floats.
// Round-trips bit-exactly.
void save_model(const SiameseParams& params, const TrainConfig& config,
                const std::string& path);
std::pair<SiameseParams, TrainConfig> load_model(const std::string& path);

void save_trace(const TrainTrace& trace, const std::string& csv_path);

// EvalReport as JSON (per-class table + confusion matrix).
void save_report(const EvalReport& report, const std::string& path);

// One flat CSV row for sweep aggregation.
std::string sweep_csv_header();
std::string sweep_csv_row(const std::string& representation, int dim,
                          const std::string& classifier, const std::string& param,
                          double macro_f1);

}  // namespace deepdoc
