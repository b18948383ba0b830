#include "xreg/tail.hpp"

#include <algorithm>

namespace xreg {

TailClassifier build_tail_classifier(const LabelFeatures& lf) {
    TailClassifier t;
    t.centroids.resize(lf.num_labels);
    t.counts = lf.counts;
    for (std::size_t i = 0; i < lf.labels.size(); ++i) t.centroids[lf.labels[i]] = lf.vectors[i];
    return t;
}

ScoreList rerank(const ScoreList& scores, const SparseVector& x, const TailClassifier& tail,
                 double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw UsageError("tail-alpha must be in [0, 1]");

    SparseVector xu;
    bool have_xu = norm2(x) > 0.0;
    if (have_xu) xu = unit_normalize(x);

    ScoreList out;
    out.reserve(scores.size());
    for (const auto& [label, score] : scores) {
        double cos = 0.0;
        if (have_xu && label < tail.centroids.size() && tail.has_centroid(label)) {
            const SparseVector& c = tail.centroids[label];
            // Centroids live in the raw feature space; ignore stray indices.
            double s = 0.0;
            std::size_t i = 0, j = 0;
            while (i < xu.size() && j < c.size()) {
                if (xu.indices[i] == c.indices[j])
                    s += xu.values[i++] * c.values[j++];
                else if (xu.indices[i] < c.indices[j])
                    ++i;
                else
                    ++j;
            }
            cos = std::max(0.0, s);
        }
        out.emplace_back(label, alpha * score + (1.0 - alpha) * cos);
    }
    std::sort(out.begin(), out.end(), score_order);
    return out;
}

} // namespace xreg
