#include "xreg/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "xreg/log.hpp"
#include "xreg/parallel.hpp"
#include "xreg/rng.hpp"
#include "xreg/tail.hpp"

namespace xreg {

std::pair<RelevanceDataset, double> normalize_relevances(const RelevanceDataset& d) {
    double y_max = 0.0;
    for (const SparseVector& y : d.relevances)
        for (double v : y.values) y_max = std::max(y_max, v);
    if (y_max <= 0.0) throw DataError("all relevances are zero; nothing to learn");

    RelevanceDataset out = d;
    for (SparseVector& y : out.relevances)
        for (double& v : y.values) v /= y_max;
    return {std::move(out), y_max};
}

std::vector<NodeTrainingSet> compute_node_weights(const RelevanceDataset& d,
                                                  const TreeTopology& topo) {
    const std::size_t num_nodes = topo.nodes.size();
    std::vector<NodeTrainingSet> sets(num_nodes);

    // leaf_of[l]: leaf node holding label l.
    std::vector<int> leaf_of(d.num_labels, -1);
    for (std::size_t n = 0; n < num_nodes; ++n)
        for (index_t l : topo.nodes[n].labels) leaf_of[l] = static_cast<int>(n);

    // Scratch z values per node, reset via the touched list after each point.
    std::vector<double> z(num_nodes, 0.0);
    std::vector<int> touched;

    for (index_t i = 0; i < d.num_points; ++i) {
        const SparseVector& y = d.relevances[i];
        touched.clear();
        // z at node = max relevance over the labels in its subtree; only the
        // union of root-to-leaf paths of this point's labels is non-zero.
        for (std::size_t j = 0; j < y.size(); ++j) {
            int n = leaf_of[y.indices[j]];
            double v = y.values[j];
            while (n >= 0 && z[n] < v) {
                if (z[n] == 0.0) touched.push_back(n);
                z[n] = v;
                n = topo.nodes[n].parent;
            }
        }

        // Root set carries every point (s = 1 there by definition).
        sets[0].points.push_back(i);
        sets[0].s.push_back(1.0);
        sets[0].z.push_back(z[0]);

        // Descend through visited nodes; both children of a visited node get
        // the point (an unvisited child keeps it only as a weighted negative
        // and is not descended into).
        std::vector<std::pair<int, double>> work;
        if (z[0] > 0.0) work.emplace_back(0, 1.0);
        while (!work.empty()) {
            auto [n, s_n] = work.back();
            work.pop_back();
            double s_child = s_n * z[n];
            if (topo.nodes[n].is_leaf()) continue;
            for (int c = 0; c < 2; ++c) {
                int child = topo.nodes[n].children[c];
                sets[child].points.push_back(i);
                sets[child].s.push_back(s_child);
                sets[child].z.push_back(z[child]);
                if (z[child] > 0.0) work.emplace_back(child, s_child);
            }
        }

        for (int n : touched) {
            ++sets[n].visit_count;
            z[n] = 0.0;
        }
    }
    return sets;
}

namespace {

std::vector<SparseVector> augment_all(const std::vector<SparseVector>& features,
                                      index_t raw_dim) {
    std::vector<SparseVector> out;
    out.reserve(features.size());
    for (const SparseVector& x : features) out.push_back(augment_with_bias(x, raw_dim));
    return out;
}

TreeModel train_tree(const RelevanceDataset& nd, const LabelFeatures& lf,
                     const std::vector<SparseVector>& aug, const std::vector<double>& norms_sq,
                     const Hyperparams& hp, int tree_index) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();

    std::uint64_t tree_seed = hp.seed ^ (0x7472656500ULL + static_cast<std::uint64_t>(tree_index));
    TreeModel tm;
    tm.topo = grow_tree(lf, hp.max_leaf, tree_seed, resolve_threads(hp.threads));
    auto t1 = clock::now();

    std::vector<NodeTrainingSet> sets = compute_node_weights(nd, tm.topo);
    const std::size_t num_nodes = tm.topo.nodes.size();
    tm.frac.resize(num_nodes);
    for (std::size_t n = 0; n < num_nodes; ++n)
        tm.frac[n] = static_cast<double>(sets[n].visit_count) / nd.num_points;
    tm.child_reg.resize(num_nodes);
    tm.label_reg.resize(num_nodes);
    auto t2 = clock::now();

    const index_t dim = nd.num_features + 1;
    parallel_for(num_nodes, hp.threads, [&](std::size_t n) {
        const TreeNode& node = tm.topo.nodes[n];
        if (!node.is_leaf()) {
            for (int c = 0; c < 2; ++c) {
                int child = node.children[c];
                const NodeTrainingSet& ts = sets[child];
                std::vector<WeightedExample> examples;
                examples.reserve(ts.points.size());
                for (std::size_t j = 0; j < ts.points.size(); ++j)
                    examples.push_back({ts.points[j], ts.s[j] * ts.z[j],
                                        ts.s[j] * (1.0 - ts.z[j])});
                SolverOptions opt;
                opt.cost = examples.empty() ? hp.C : hp.C / static_cast<double>(examples.size());
                opt.tol = hp.tol;
                opt.max_epochs = hp.max_epochs;
                opt.prune = hp.prune;
                std::mt19937_64 rng = make_rng(hp.seed, {0x6e6f6465ULL,
                                                         static_cast<std::uint64_t>(tree_index),
                                                         static_cast<std::uint64_t>(child)});
                tm.child_reg[n][c] = solve_logistic_dual(examples, aug, dim, opt, rng, &norms_sq);
            }
            return;
        }

        // Leaf: one conditional regressor per resident label. Targets are the
        // labels' own normalized relevances; every point that reaches the
        // leaf and lacks the label is a pure negative.
        const NodeTrainingSet& ts = sets[n];
        tm.label_reg[n].resize(node.labels.size());
        std::vector<double> target(ts.points.size());
        for (std::size_t j = 0; j < node.labels.size(); ++j) {
            index_t label = node.labels[j];
            for (std::size_t p = 0; p < ts.points.size(); ++p) {
                const SparseVector& y = nd.relevances[ts.points[p]];
                auto it = std::lower_bound(y.indices.begin(), y.indices.end(), label);
                target[p] = (it != y.indices.end() && *it == label)
                                ? y.values[it - y.indices.begin()]
                                : 0.0;
            }
            std::vector<WeightedExample> examples;
            examples.reserve(ts.points.size());
            for (std::size_t p = 0; p < ts.points.size(); ++p)
                examples.push_back({ts.points[p], ts.s[p] * target[p],
                                    ts.s[p] * (1.0 - target[p])});
            SolverOptions opt;
            opt.cost = examples.empty() ? hp.C : hp.C / static_cast<double>(examples.size());
            opt.tol = hp.tol;
            opt.max_epochs = hp.max_epochs;
            opt.prune = hp.prune;
            std::mt19937_64 rng = make_rng(hp.seed, {0x6c656166ULL,
                                                     static_cast<std::uint64_t>(tree_index),
                                                     static_cast<std::uint64_t>(n),
                                                     static_cast<std::uint64_t>(label)});
            tm.label_reg[n][j] = solve_logistic_dual(examples, aug, dim, opt, rng, &norms_sq);
        }
    });
    auto t3 = clock::now();

    auto ms = [](auto a, auto b) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
    };
    log_info("tree=" + std::to_string(tree_index) + " nodes=" + std::to_string(num_nodes) +
             " leaves=" + std::to_string(tm.topo.num_leaves()) +
             " depth=" + std::to_string(tm.topo.max_depth()) +
             " grow_ms=" + std::to_string(ms(t0, t1)) + " weights_ms=" + std::to_string(ms(t1, t2)) +
             " solve_ms=" + std::to_string(ms(t2, t3)));
    return tm;
}

} // namespace

XRegModel train(const RelevanceDataset& d, const Hyperparams& hp) {
    if (hp.trees < 1) throw UsageError("trees must be >= 1");
    if (hp.max_leaf < 1) throw UsageError("max-leaf must be >= 1");
    if (!(hp.C > 0.0)) throw UsageError("C must be > 0");

    auto [nd, y_max] = normalize_relevances(d);

    XRegModel m;
    m.num_features = d.num_features;
    m.num_labels = d.num_labels;
    m.y_max = y_max;
    m.hp = hp;

    LabelFeatures lf = build_label_features(nd);
    m.tail = build_tail_classifier(lf);
    m.has_tail = true;

    std::vector<SparseVector> aug = augment_all(nd.features, nd.num_features);
    std::vector<double> norms_sq(aug.size());
    for (std::size_t i = 0; i < aug.size(); ++i) norms_sq[i] = norm2_squared(aug[i]);

    m.trees.reserve(hp.trees);
    for (int t = 0; t < hp.trees; ++t)
        m.trees.push_back(train_tree(nd, lf, aug, norms_sq, hp, t));
    return m;
}

} // namespace xreg
