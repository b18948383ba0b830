#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "xreg/error.hpp"

namespace xreg {

using index_t = std::uint32_t;

// One sparse score/prediction entry.
using ScoreEntry = std::pair<index_t, double>;
// Sparse scores ordered by descending score (ties: ascending index).
using ScoreList = std::vector<ScoreEntry>;

// Sparse vector over a declared dimension. Invariants: indices strictly
// increasing and < dim, values finite and non-zero. Immutable by convention
// once built; all kernels rely on the sorted order.
struct SparseVector {
    std::vector<index_t> indices;
    std::vector<double> values;
    index_t dim = 0;

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
};

// Builds a SparseVector from unordered (index, value) pairs: sorts by index,
// drops exact zeros, rejects duplicates, out-of-range indices and non-finite
// values.
SparseVector make_sparse(index_t dim, std::vector<ScoreEntry> entries);

// Throws UsageError if any invariant is violated.
void validate_sparse(const SparseVector& v);

// Exact sparse inner product by merge iteration; requires a.dim == b.dim.
double dot(const SparseVector& a, const SparseVector& b);

// Inner product against a dense vector of length >= v.dim.
double dot_dense(const std::vector<double>& dense, const SparseVector& v);

double norm2(const SparseVector& v);
double norm2_squared(const SparseVector& v);

// Returns v scaled to unit L2 norm; same support. Throws DataError on an
// all-zero input (callers decide the policy for degenerate vectors).
SparseVector unit_normalize(const SparseVector& v);

// Ordered index set of the k highest scores; ties resolve to the lower
// index so every ranking is deterministic. Short input gives short output.
std::vector<index_t> top_k(const ScoreList& scores, std::size_t k);

// Same selection but keeps the scores; result ordered (score desc, index asc).
ScoreList top_k_entries(ScoreList scores, std::size_t k);

// Comparator shared by every ranking in the library.
inline bool score_order(const ScoreEntry& a, const ScoreEntry& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
}

} // namespace xreg
