#pragma once

#include <utility>
#include <vector>

#include "xreg/dataset.hpp"
#include "xreg/model.hpp"

namespace xreg {

// Divides every relevance weight by the global maximum so weights lie in
// (0, 1] and can be treated as marginal probabilities. Returns the scale so
// predictions can be mapped back. Throws DataError when every relevance is
// zero.
std::pair<RelevanceDataset, double> normalize_relevances(const RelevanceDataset& d);

// Per-node training set: the points whose path importance s is positive at
// the node, with their (s, z) pairs. z is the largest normalized relevance of
// any label in the node's subtree; s multiplies the parents' z values along
// the root path (1 at the root).
struct NodeTrainingSet {
    std::vector<index_t> points;
    std::vector<double> s;
    std::vector<double> z;
    std::size_t visit_count = 0; // points with z > 0
};

// Requires a normalized dataset. Output is indexed by node id.
std::vector<NodeTrainingSet> compute_node_weights(const RelevanceDataset& d,
                                                  const TreeTopology& topo);

XRegModel train(const RelevanceDataset& d, const Hyperparams& hp);

} // namespace xreg
