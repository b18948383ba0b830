#include "xreg/label_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xreg/parallel.hpp"
#include "xreg/rng.hpp"

namespace xreg {

std::size_t TreeTopology::num_leaves() const {
    std::size_t n = 0;
    for (const TreeNode& node : nodes)
        if (node.is_leaf()) ++n;
    return n;
}

int TreeTopology::max_depth() const {
    int d = 0;
    for (const TreeNode& node : nodes) d = std::max(d, node.depth);
    return d;
}

LabelFeatures build_label_features(const RelevanceDataset& d) {
    LabelFeatures f;
    f.num_labels = d.num_labels;
    f.num_features = d.num_features;
    f.counts.assign(d.num_labels, 0);

    // Invert the relevance matrix: per label, the points it occurs in.
    std::vector<std::vector<ScoreEntry>> occurrences(d.num_labels);
    for (index_t i = 0; i < d.num_points; ++i) {
        const SparseVector& y = d.relevances[i];
        for (std::size_t j = 0; j < y.size(); ++j) {
            occurrences[y.indices[j]].emplace_back(i, y.values[j]);
            ++f.counts[y.indices[j]];
        }
    }

    std::vector<double> scratch(d.num_features, 0.0);
    std::vector<index_t> touched;
    for (index_t l = 0; l < d.num_labels; ++l) {
        if (occurrences[l].empty()) {
            f.orphans.push_back(l);
            continue;
        }
        touched.clear();
        for (const auto& [point, weight] : occurrences[l]) {
            const SparseVector& x = d.features[point];
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (scratch[x.indices[j]] == 0.0) touched.push_back(x.indices[j]);
                scratch[x.indices[j]] += weight * x.values[j];
            }
        }
        std::sort(touched.begin(), touched.end());
        SparseVector v;
        v.dim = d.num_features;
        double norm_sq = 0.0;
        for (index_t idx : touched) {
            double val = scratch[idx];
            scratch[idx] = 0.0;
            if (val == 0.0) continue; // exact cancellation
            v.indices.push_back(idx);
            v.values.push_back(val);
            norm_sq += val * val;
        }
        if (norm_sq == 0.0) {
            // Weighted sum cancelled to zero; treat like a zero-mass label.
            f.orphans.push_back(l);
            continue;
        }
        double inv = 1.0 / std::sqrt(norm_sq);
        for (double& val : v.values) val *= inv;
        f.labels.push_back(l);
        f.vectors.push_back(std::move(v));
    }
    return f;
}

namespace {

void accumulate_dense(std::vector<double>& dense, const SparseVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) dense[v.indices[i]] += v.values[i];
}

// Unit-normalizes in place; returns false if the vector is all zero.
bool unit_normalize_dense(std::vector<double>& dense) {
    double norm_sq = 0.0;
    for (double x : dense) norm_sq += x * x;
    if (norm_sq == 0.0) return false;
    double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : dense) x *= inv;
    return true;
}

} // namespace

std::pair<std::vector<index_t>, std::vector<index_t>> balanced_two_means(
    const std::vector<const SparseVector*>& vecs, std::mt19937_64& rng,
    const TwoMeansOptions& opt) {
    const std::size_t n = vecs.size();
    if (n < 2) throw UsageError("balanced_two_means needs at least 2 vectors");
    const index_t dim = vecs[0]->dim;

    std::vector<std::vector<double>> centers(2, std::vector<double>(dim, 0.0));
    std::size_t c0 = uniform_index(rng, n);
    std::size_t c1 = c0;
    while (c1 == c0) c1 = uniform_index(rng, n);
    accumulate_dense(centers[0], *vecs[c0]);
    accumulate_dense(centers[1], *vecs[c1]);

    const std::size_t left_size = (n + 1) / 2;
    std::vector<std::pair<double, index_t>> delta(n);
    std::vector<std::uint8_t> side(n, 0);
    std::vector<double> cumulative_cos(2);

    double old_objective = -2.0;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            cumulative_cos[0] = dot_dense(centers[0], *vecs[i]);
            cumulative_cos[1] = dot_dense(centers[1], *vecs[i]);
            delta[i] = {cumulative_cos[0] - cumulative_cos[1], static_cast<index_t>(i)};
        }
        std::sort(delta.begin(), delta.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        double objective = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            index_t i = delta[r].second;
            side[i] = r < left_size ? 0 : 1;
            objective += dot_dense(centers[side[i]], *vecs[i]);
        }
        objective /= static_cast<double>(n);
        if (objective - old_objective < opt.tol) break;
        old_objective = objective;

        for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) accumulate_dense(centers[side[i]], *vecs[i]);
        for (int c = 0; c < 2; ++c) {
            if (!unit_normalize_dense(centers[c])) {
                // Members cancelled out; re-seed from a random member.
                std::size_t pick = uniform_index(rng, n);
                accumulate_dense(centers[c], *vecs[pick]);
                unit_normalize_dense(centers[c]);
            }
        }
    }

    std::pair<std::vector<index_t>, std::vector<index_t>> out;
    for (std::size_t i = 0; i < n; ++i)
        (side[i] == 0 ? out.first : out.second).push_back(static_cast<index_t>(i));
    return out;
}

std::pair<std::vector<index_t>, std::vector<index_t>> balanced_two_means(
    const std::vector<const SparseVector*>& vecs, std::uint64_t seed,
    const TwoMeansOptions& opt) {
    std::mt19937_64 rng = make_rng(seed, {});
    return balanced_two_means(vecs, rng, opt);
}

TreeTopology grow_tree(const LabelFeatures& f, index_t max_leaf, std::uint64_t seed,
                       int threads) {
    if (max_leaf < 1) throw UsageError("max_leaf must be >= 1");
    if (f.labels.empty()) throw DataError("no labels with training mass; nothing to cluster");

    TreeTopology topo;
    // Work items hold positions into f.labels/f.vectors.
    std::vector<std::vector<index_t>> node_members;

    std::vector<index_t> all(f.labels.size());
    std::iota(all.begin(), all.end(), 0);
    topo.nodes.emplace_back();
    node_members.push_back(std::move(all));

    std::vector<int> level{0};
    while (!level.empty()) {
        std::vector<int> to_split;
        for (int id : level)
            if (node_members[id].size() > max_leaf) to_split.push_back(id);

        std::vector<std::pair<std::vector<index_t>, std::vector<index_t>>> parts(to_split.size());
        parallel_for(to_split.size(), threads, [&](std::size_t j) {
            int id = to_split[j];
            const std::vector<index_t>& members = node_members[id];
            std::vector<const SparseVector*> vecs(members.size());
            for (std::size_t i = 0; i < members.size(); ++i) vecs[i] = &f.vectors[members[i]];
            std::mt19937_64 rng = make_rng(seed, {0x73706c6974ULL, static_cast<std::uint64_t>(id)});
            auto [left, right] = balanced_two_means(vecs, rng);
            auto remap = [&](const std::vector<index_t>& positions) {
                std::vector<index_t> out(positions.size());
                for (std::size_t i = 0; i < positions.size(); ++i) out[i] = members[positions[i]];
                return out;
            };
            parts[j] = {remap(left), remap(right)};
        });

        std::vector<int> next_level;
        for (std::size_t j = 0; j < to_split.size(); ++j) {
            int id = to_split[j];
            for (int c = 0; c < 2; ++c) {
                int child = static_cast<int>(topo.nodes.size());
                topo.nodes.emplace_back();
                topo.nodes[child].parent = id;
                topo.nodes[child].depth = topo.nodes[id].depth + 1;
                topo.nodes[id].children[c] = child;
                node_members.push_back(c == 0 ? std::move(parts[j].first)
                                              : std::move(parts[j].second));
                next_level.push_back(child);
            }
            node_members[id].clear();
        }
        level = std::move(next_level);
    }

    std::vector<int> leaves;
    for (std::size_t id = 0; id < topo.nodes.size(); ++id) {
        if (!topo.nodes[id].is_leaf()) continue;
        leaves.push_back(static_cast<int>(id));
        TreeNode& node = topo.nodes[id];
        node.labels.reserve(node_members[id].size());
        for (index_t pos : node_members[id]) node.labels.push_back(f.labels[pos]);
    }
    for (std::size_t i = 0; i < f.orphans.size(); ++i)
        topo.nodes[leaves[i % leaves.size()]].labels.push_back(f.orphans[i]);
    for (int id : leaves) {
        auto& labels = topo.nodes[id].labels;
        std::sort(labels.begin(), labels.end());
    }
    return topo;
}

} // namespace xreg
