#pragma once

#include "xreg/dataset.hpp"
#include "xreg/model.hpp"

namespace xreg {

// Beam-search top-k labels for one point. Per tree the traversal is
// breadth-first keeping the `beam` highest accumulated-probability nodes per
// level (log-space); leaf labels score path probability times the label
// regressor's sigmoid. Tree probabilities are averaged (a label absent from
// a tree's beam contributes 0) and the result is rescaled by y_max.
// x is given in raw feature space; features beyond the model's space are
// ignored.
ScoreList predict_point(const XRegModel& m, const SparseVector& x, int beam, int topk);

// Exact inference: multiplies sigmoids along every root-to-label path,
// averages over trees and rescales by y_max — the same semantics as beam
// search with an unbounded beam. Intended as a test oracle and for
// small-scale evaluation; refuses num_labels > 10^6 unless forced.
std::vector<double> predict_all_exact(const XRegModel& m, const SparseVector& x,
                                      bool force = false);

// Applies predict_point to every row; deterministic output order.
// tail_alpha < 0 disables re-ranking.
PredictionFile predict_pointwise_file(const XRegModel& m,
                                      const std::vector<SparseVector>& points, int beam,
                                      int topk, int threads, double tail_alpha = -1.0);

} // namespace xreg
