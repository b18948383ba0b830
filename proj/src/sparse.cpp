#include "xreg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace xreg {

SparseVector make_sparse(index_t dim, std::vector<ScoreEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const ScoreEntry& a, const ScoreEntry& b) { return a.first < b.first; });
    SparseVector v;
    v.dim = dim;
    v.indices.reserve(entries.size());
    v.values.reserve(entries.size());
    for (const auto& [idx, val] : entries) {
        if (idx >= dim)
            throw UsageError("sparse index " + std::to_string(idx) + " >= dim " + std::to_string(dim));
        if (!std::isfinite(val))
            throw UsageError("non-finite value at index " + std::to_string(idx));
        if (!v.indices.empty() && v.indices.back() == idx)
            throw UsageError("duplicate index " + std::to_string(idx));
        if (val == 0.0) continue;
        v.indices.push_back(idx);
        v.values.push_back(val);
    }
    return v;
}

void validate_sparse(const SparseVector& v) {
    if (v.indices.size() != v.values.size())
        throw UsageError("sparse vector index/value length mismatch");
    for (std::size_t i = 0; i < v.indices.size(); ++i) {
        if (v.indices[i] >= v.dim)
            throw UsageError("sparse index " + std::to_string(v.indices[i]) + " >= dim " +
                             std::to_string(v.dim));
        if (i > 0 && v.indices[i - 1] >= v.indices[i])
            throw UsageError("sparse indices not strictly increasing");
        if (!std::isfinite(v.values[i]) || v.values[i] == 0.0)
            throw UsageError("sparse value must be finite and non-zero");
    }
}

double dot(const SparseVector& a, const SparseVector& b) {
    if (a.dim != b.dim)
        throw UsageError("dot dimension mismatch: " + std::to_string(a.dim) + " vs " +
                         std::to_string(b.dim));
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.indices.size() && j < b.indices.size()) {
        if (a.indices[i] == b.indices[j]) {
            sum += a.values[i] * b.values[j];
            ++i;
            ++j;
        } else if (a.indices[i] < b.indices[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

double dot_dense(const std::vector<double>& dense, const SparseVector& v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.indices.size(); ++i) sum += dense[v.indices[i]] * v.values[i];
    return sum;
}

double norm2_squared(const SparseVector& v) {
    double sum = 0.0;
    for (double x : v.values) sum += x * x;
    return sum;
}

double norm2(const SparseVector& v) { return std::sqrt(norm2_squared(v)); }

SparseVector unit_normalize(const SparseVector& v) {
    double n = norm2(v);
    if (n == 0.0) throw DataError("cannot normalize an all-zero vector");
    SparseVector out = v;
    for (double& x : out.values) x /= n;
    return out;
}

ScoreList top_k_entries(ScoreList scores, std::size_t k) {
    k = std::min(k, scores.size());
    std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(k),
                      scores.end(), score_order);
    scores.resize(k);
    return scores;
}

std::vector<index_t> top_k(const ScoreList& scores, std::size_t k) {
    ScoreList selected = top_k_entries(scores, k);
    std::vector<index_t> out;
    out.reserve(selected.size());
    for (const auto& [idx, val] : selected) out.push_back(idx);
    return out;
}

} // namespace xreg
