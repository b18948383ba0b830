#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "xreg/label_tree.hpp"
#include "xreg/linear.hpp"
#include "xreg/sparse.hpp"

namespace xreg {

struct Hyperparams {
    int trees = 3;          // T
    index_t max_leaf = 100; // M
    double C = 10.0;
    double tol = 0.1;
    int max_epochs = 100;
    double prune = 0.05;
    std::uint64_t seed = 0;
    int threads = 0; // 0 = all cores
};

// Generative per-label scorer for tail re-ranking: the label's unit training
// centroid plus its training count. Labels without mass have no centroid.
struct TailClassifier {
    std::vector<SparseVector> centroids;   // per label; empty vector = none
    std::vector<std::uint32_t> counts;     // per label

    bool has_centroid(index_t l) const { return !centroids[l].empty(); }
};

struct TreeModel {
    TreeTopology topo;
    // child_reg[n][c]: regressor for edge n -> children[c] (internal nodes).
    std::vector<std::array<LinearRegressor, 2>> child_reg;
    // label_reg[n][j]: regressor for topo.nodes[n].labels[j] (leaves).
    std::vector<std::vector<LinearRegressor>> label_reg;
    // Fraction of training points with non-zero relevance in each subtree.
    std::vector<double> frac;
};

struct XRegModel {
    index_t num_features = 0; // raw D; internal feature space is D+1
    index_t num_labels = 0;
    double y_max = 1.0; // relevance normalization scale
    Hyperparams hp;
    std::vector<TreeModel> trees;
    TailClassifier tail;
    bool has_tail = false;

    index_t augmented_dim() const { return num_features + 1; }
};

// Versioned binary container with magic bytes and a CRC32 trailer; a loaded
// model reproduces the saved model's predictions exactly.
void save_model(const XRegModel& m, const std::string& path);
XRegModel load_model(const std::string& path);

inline const char* model_format_magic() { return "XREGMB01"; }
inline const char* model_rng_name() { return "mt19937_64+splitmix64"; }

} // namespace xreg
