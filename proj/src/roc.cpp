#include "trendcc/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trendcc/error.hpp"

namespace trendcc {

RocCurve roc_curve(std::span<const ScoredLabel> data) {
    std::vector<ScoredLabel> sorted(data.begin(), data.end());
    RocCurve curve;
    for (const auto& d : sorted) {
        if (!std::isfinite(d.score)) throw ParameterError("ROC scores must be finite");
        ++(d.positive ? curve.positives : curve.negatives);
    }
    if (curve.positives == 0 || curve.negatives == 0)
        throw DegenerateLabelsError("ROC needs at least one positive and one negative label");
    std::sort(sorted.begin(), sorted.end(), [](const ScoredLabel& l, const ScoredLabel& r) { return l.score > r.score; });

    const double np = static_cast<double>(curve.positives), nn = static_cast<double>(curve.negatives);
    std::size_t tp = 0, fp = 0;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    // Twice the area in units of one positive-negative pair, kept integral.
    std::size_t area2 = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double s = sorted[i].score;
        std::size_t dtp = 0, dfp = 0;
        for (; i < sorted.size() && sorted[i].score == s; ++i) ++(sorted[i].positive ? dtp : dfp);
        area2 += dfp * (2 * tp + dtp);
        tp += dtp;
        fp += dfp;
        curve.points.push_back({static_cast<double>(fp) / nn, static_cast<double>(tp) / np, s});
    }
    curve.auc = static_cast<double>(area2) / (2.0 * np * nn);
    return curve;
}

} // namespace trendcc
