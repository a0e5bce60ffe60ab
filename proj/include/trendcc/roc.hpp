#pragma once

#include <span>
#include <utility>
#include <vector>

namespace trendcc {

struct ScoredLabel {
    double score;
    bool positive;
};

struct RocPoint {
    double fpr;
    double tpr;
    /// Scores >= threshold are called positive; +inf for the (0, 0) corner.
    double threshold;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// Threshold sweep over distinct scores in descending order, ties grouped,
/// area by the trapezoid rule (Mann-Whitney with half credit for ties).
/// Throws DegenerateLabelsError unless both classes occur and ParameterError
/// on non-finite scores.
RocCurve roc_curve(std::span<const ScoredLabel> data);

} // namespace trendcc
