#include "xreg/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "xreg/log.hpp"
#include "xreg/parallel.hpp"
#include "xreg/tail.hpp"

namespace xreg {

namespace {

struct BeamEntry {
    int node;
    double logp; // accumulated log path probability, <= 0
};

// (logp desc, node asc): the fixed tie-break keeps beams deterministic.
bool beam_order(const BeamEntry& a, const BeamEntry& b) {
    if (a.logp != b.logp) return a.logp > b.logp;
    return a.node < b.node;
}

void accumulate_tree_scores(const TreeModel& t, const SparseVector& xa, int beam,
                            std::unordered_map<index_t, double>& sums) {
    std::vector<BeamEntry> frontier{{0, 0.0}};
    std::vector<BeamEntry> candidates;
    // The root may itself be a leaf (single-node tree).
    if (t.topo.nodes[0].is_leaf()) {
        for (std::size_t j = 0; j < t.topo.nodes[0].labels.size(); ++j) {
            double lp = log_sigmoid(dot(t.label_reg[0][j].w, xa));
            sums[t.topo.nodes[0].labels[j]] += std::exp(lp);
        }
        return;
    }
    while (!frontier.empty()) {
        candidates.clear();
        for (const BeamEntry& e : frontier) {
            const TreeNode& node = t.topo.nodes[e.node];
            for (int c = 0; c < 2; ++c) {
                double lp = e.logp + log_sigmoid(dot(t.child_reg[e.node][c].w, xa));
                candidates.push_back({node.children[c], lp});
            }
        }
        std::size_t keep = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(beam));
        std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(),
                          beam_order);
        candidates.resize(keep);

        frontier.clear();
        for (const BeamEntry& e : candidates) {
            const TreeNode& node = t.topo.nodes[e.node];
            if (node.is_leaf()) {
                for (std::size_t j = 0; j < node.labels.size(); ++j) {
                    double lp = e.logp + log_sigmoid(dot(t.label_reg[e.node][j].w, xa));
                    sums[node.labels[j]] += std::exp(lp);
                }
            } else {
                frontier.push_back(e);
            }
        }
    }
}

} // namespace

ScoreList predict_point(const XRegModel& m, const SparseVector& x, int beam, int topk) {
    if (beam < 1) throw UsageError("beam width must be >= 1");
    if (topk < 1) throw UsageError("topk must be >= 1");

    SparseVector xa = to_model_space(x, m.num_features);
    std::unordered_map<index_t, double> sums;
    for (const TreeModel& t : m.trees) accumulate_tree_scores(t, xa, beam, sums);

    ScoreList scored;
    scored.reserve(sums.size());
    const double scale = m.y_max / static_cast<double>(m.trees.size());
    for (const auto& [label, sum] : sums) {
        double v = sum * scale;
        scored.emplace_back(label, v > 0.0 ? v : std::numeric_limits<double>::min());
    }
    return top_k_entries(std::move(scored), static_cast<std::size_t>(topk));
}

std::vector<double> predict_all_exact(const XRegModel& m, const SparseVector& x, bool force) {
    if (m.num_labels > 1000000 && !force)
        throw UsageError("predict_all_exact refused for num_labels > 1e6 (cost guard)");

    SparseVector xa = to_model_space(x, m.num_features);
    std::vector<double> scores(m.num_labels, 0.0);
    for (const TreeModel& t : m.trees) {
        std::vector<std::pair<int, double>> stack{{0, 0.0}};
        while (!stack.empty()) {
            auto [n, logp] = stack.back();
            stack.pop_back();
            const TreeNode& node = t.topo.nodes[n];
            if (node.is_leaf()) {
                for (std::size_t j = 0; j < node.labels.size(); ++j) {
                    double lp = logp + log_sigmoid(dot(t.label_reg[n][j].w, xa));
                    scores[node.labels[j]] += std::exp(lp);
                }
            } else {
                for (int c = 0; c < 2; ++c)
                    stack.emplace_back(node.children[c],
                                       logp + log_sigmoid(dot(t.child_reg[n][c].w, xa)));
            }
        }
    }
    const double scale = m.y_max / static_cast<double>(m.trees.size());
    for (double& s : scores) s *= scale;
    return scores;
}

PredictionFile predict_pointwise_file(const XRegModel& m,
                                      const std::vector<SparseVector>& points, int beam,
                                      int topk, int threads, double tail_alpha) {
    if (tail_alpha >= 0.0 && !m.has_tail)
        throw DataError("model carries no tail classifier section");

    PredictionFile out;
    out.orientation = Orientation::pointwise;
    out.rows = static_cast<index_t>(points.size());
    out.cols = m.num_labels;
    out.entries.resize(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        ScoreList scores = predict_point(m, points[i], beam, topk);
        if (tail_alpha >= 0.0) scores = rerank(scores, points[i], m.tail, tail_alpha);
        out.entries[i] = std::move(scores);
    });
    return out;
}

} // namespace xreg
