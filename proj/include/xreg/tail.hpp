#pragma once

#include "xreg/label_tree.hpp"
#include "xreg/model.hpp"

namespace xreg {

// The centroids are the Eq.-style label representations already built for
// tree construction; counts are per-label training occurrence counts.
TailClassifier build_tail_classifier(const LabelFeatures& lf);

// Re-scores the given candidates as alpha*score + (1-alpha)*max(0, cos(x, v_l))
// and re-orders them. Never adds or removes labels; labels without a centroid
// keep a zero cosine term. x is unit-normalized internally for the cosine.
ScoreList rerank(const ScoreList& scores, const SparseVector& x, const TailClassifier& tail,
                 double alpha);

} // namespace xreg
