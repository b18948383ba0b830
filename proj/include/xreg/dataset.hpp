#pragma once

#include <string>
#include <vector>

#include "xreg/sparse.hpp"

namespace xreg {

// N sparse feature rows paired with N sparse relevance rows over L labels.
// Relevance values are >= 0; after training-time normalization they lie in
// (0, 1].
struct RelevanceDataset {
    index_t num_points = 0;
    index_t num_features = 0;
    index_t num_labels = 0;
    std::vector<SparseVector> features;   // dim == num_features
    std::vector<SparseVector> relevances; // dim == num_labels
};

// Text format, one point per line after a "N D L" header:
//   l1:w1,l2:w2 f1:v1 f2:v2 ...
// Label tokens are comma-separated and may omit ":w" (binary files parse as
// weight 1.0); a line with no labels starts with a space. Indices inside a
// line may be unsorted; they are sorted at parse time.
RelevanceDataset read_dataset(const std::string& path);
void write_dataset(const RelevanceDataset& d, const std::string& path);

enum class Orientation { pointwise, labelwise };

// Sparse predictions, one row per test point (pointwise) or per label
// (labelwise). Entries are (index, score), descending score.
struct PredictionFile {
    Orientation orientation = Orientation::pointwise;
    index_t rows = 0;
    index_t cols = 0;
    std::vector<ScoreList> entries;
};

// File format: header "R C", then one line of "index:score" pairs per row.
// Scores are printed at 6 significant digits and survive a round trip.
void write_predictions(const PredictionFile& p, const std::string& path);
PredictionFile read_predictions(const std::string& path);

// Appends the constant bias feature (index raw_dim, value 1.0); the model's
// internal feature space is raw_dim + 1.
SparseVector augment_with_bias(const SparseVector& x, index_t raw_dim);

// Maps a test-time vector into a model's raw feature space: drops indices
// >= model_raw_dim, then appends the bias feature. Returns dim
// model_raw_dim + 1.
SparseVector to_model_space(const SparseVector& x, index_t model_raw_dim);

// Shortest text form of a score that parses back to the same 6-significant-
// digit value ("%.6g").
std::string format_score(double v);

} // namespace xreg
