#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "trendcc/concordance.hpp"
#include "trendcc/dataset.hpp"
#include "trendcc/error.hpp"
#include "trendcc/roc.hpp"

namespace trendcc {

using Json = nlohmann::ordered_json;

struct MethodPair {
    std::string gold;
    std::string experimental;

    /// "J,R" or "J:R".
    static MethodPair parse(std::string_view text);
    std::string name() const { return gold + "-" + experimental; }
};

/// Exclusion half-width: either given directly or the q-quantile of the
/// pooled absolute differences {|x_it|} ∪ {|y_it|} of the pair.
struct ExclusionMode {
    enum Kind { Fixed, Quantile } kind = Quantile;
    double value = 0.1;

    static ExclusionMode fixed(double a) { return {Fixed, a}; }
    static ExclusionMode quantile(double q) { return {Quantile, q}; }
    /// Throws ConfigError: fixed needs a >= 0, quantile needs 0 < q < 1.
    void validate() const;
    Json to_json() const;
};

double resolve_exclusion(std::span<const DiffSeries> diffs, const ExclusionMode& mode);
double resolve_exclusion(const Dataset& data, const MethodPair& pair, const ExclusionMode& mode);

struct AnalysisConfig {
    MethodPair pair;
    ExclusionMode exclusion;
    /// 0 means m = T.
    std::size_t m = 0;
    double tol = 1e-6;
    std::int64_t max_evals = std::int64_t{1} << 22;
    std::uint64_t seed = 0;
};

struct AnalysisReport {
    Json json;
    /// 0 when every estimator succeeded, else the largest estimator exit code.
    int exit_code = 0;
};

/// ccr, control1, control2 and the proposal for one pair. Configuration
/// problems (unknown methods, m > T) throw; estimator failures are written
/// into the report and raise exit_code.
AnalysisReport analyze(const Dataset& data, const AnalysisConfig& config);

Json to_json(const ConcordanceResult& r);
Json to_json(const ControlStats& s);
Json to_json(const GaussianModel& model);

/// Estimator failure as a report entry.
Json error_json(const Error& e);

struct LabelledPair {
    MethodPair pair;
    bool positive = false;
};

struct SubsampleConfig {
    std::vector<LabelledPair> pairs;
    std::size_t k = 10;
    std::size_t iters = 1000;
    ExclusionMode exclusion;
    /// 0 means m = T.
    std::size_t m = 0;
    double tol = 1e-4;
    std::int64_t max_evals = std::int64_t{1} << 22;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct SubsampleResult {
    /// ccr, control1, control2, proposal.
    std::array<RocCurve, 4> curves;
    /// Iterations dropped per method because an estimator failed on some pair.
    std::array<std::size_t, 4> failed_iterations{};
    /// Exclusion half-width per pair, resolved on the full dataset.
    std::vector<double> a;
    std::size_t m = 0;
};

/// Each iteration draws k distinct subjects (shared by all pairs) and scores
/// every pair with the four estimators at threshold m. Deterministic for a
/// given seed regardless of the thread count.
SubsampleResult subsample_auc(const Dataset& data, const SubsampleConfig& config);

Json to_json(const SubsampleResult& r, const SubsampleConfig& config);

struct PlotCounts {
    std::size_t agree = 0;
    std::size_t disagree = 0;
    std::size_t excluded_agree = 0;
    std::size_t excluded_disagree = 0;
};

/// Four-quadrant plot as SVG plus a companion CSV of subject,t,x,y,quadrant,class.
/// Throws DataError on empty input and DataError when a file cannot be written.
PlotCounts render_quadrant_plot(std::span<const DiffSeries> diffs, double a, const std::string& svg_path,
                                const std::string& csv_path);

/// In-memory variant used by the file writer.
PlotCounts render_quadrant_plot(std::span<const DiffSeries> diffs, double a, std::ostream& svg, std::ostream& csv);

} // namespace trendcc
