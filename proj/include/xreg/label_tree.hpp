#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "xreg/dataset.hpp"
#include "xreg/sparse.hpp"

namespace xreg {

// Per-label feature representation: the unit vector along the relevance-
// weighted average of the training points. Labels with zero training mass
// have no representation and are listed as orphans.
struct LabelFeatures {
    index_t num_labels = 0;
    index_t num_features = 0;
    std::vector<index_t> labels;       // labels with mass, ascending
    std::vector<SparseVector> vectors; // parallel to labels, unit L2 norm
    std::vector<index_t> orphans;      // zero-mass labels, ascending
    std::vector<std::uint32_t> counts; // per label: # points with y > 0 (size num_labels)
};

LabelFeatures build_label_features(const RelevanceDataset& d);

struct TreeNode {
    int parent = -1;
    int children[2] = {-1, -1};
    int depth = 0;
    std::vector<index_t> labels; // leaves only, ascending

    bool is_leaf() const { return children[0] < 0; }
};

// Balanced binary tree over label indices. Node ids are breadth-first:
// node 0 is the root and children always have larger ids than their parent.
struct TreeTopology {
    std::vector<TreeNode> nodes;

    std::size_t num_leaves() const;
    int max_depth() const;
};

struct TwoMeansOptions {
    int max_iter = 20;
    double tol = 1e-4;
};

// Balanced spherical 2-means over unit vectors: each iteration assigns the
// half of the points most drawn to the first centroid to the left side, the
// rest to the right, then recomputes unit-mean centroids. Returns positions
// into `vecs`; sizes differ by at most 1. Requires >= 2 vectors.
std::pair<std::vector<index_t>, std::vector<index_t>> balanced_two_means(
    const std::vector<const SparseVector*>& vecs, std::mt19937_64& rng,
    const TwoMeansOptions& opt = {});

std::pair<std::vector<index_t>, std::vector<index_t>> balanced_two_means(
    const std::vector<const SparseVector*>& vecs, std::uint64_t seed,
    const TwoMeansOptions& opt = {});

// Recursively splits labels until every node holds <= max_leaf, then deals
// orphan labels round-robin across leaves so each label lives in exactly one
// leaf. Deterministic in (f, max_leaf, seed) regardless of thread count.
TreeTopology grow_tree(const LabelFeatures& f, index_t max_leaf, std::uint64_t seed,
                       int threads = 1);

} // namespace xreg
