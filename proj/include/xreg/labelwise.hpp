#pragma once

#include "xreg/dataset.hpp"
#include "xreg/model.hpp"

namespace xreg {

// Keeps the min(cap, |scored|) highest entries, descending score, ties by
// ascending index.
ScoreList retain_top(ScoreList scored, std::size_t cap);

// Capacity allotted to a node during labelwise routing: ceil(F * frac * M)
// test points, floored at 1 whenever frac > 0 so rounding cannot starve a
// trained label; frac == 0 gives 0.
std::size_t node_capacity(double factor, double frac, std::size_t num_test);

// Labelwise inference: routes the whole test corpus down each tree
// breadth-first. Every node retains its capacity-many highest accumulated
// probabilities; leaves score their labels and keep per_label test points.
// Per-tree probabilities are averaged per (label, point) — a pair missing
// from a tree contributes 0 — and the top per_label points per label are
// emitted, rescaled by y_max. Rows of the result are labels.
PredictionFile predict_labelwise(const XRegModel& m, const std::vector<SparseVector>& points,
                                 double factor, int per_label, int threads);

} // namespace xreg
