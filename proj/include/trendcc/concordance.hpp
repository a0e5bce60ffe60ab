#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendcc/core.hpp"
#include "trendcc/mvn.hpp"

namespace trendcc {

/// One quadrant label per period.
struct QuadrantPattern {
    std::vector<Quadrant> labels;

    std::size_t periods() const noexcept { return labels.size(); }
    std::size_t agreement_count() const noexcept;
    std::string to_string() const;
    /// Parses e.g. "AD". Throws ParameterError on other symbols.
    static QuadrantPattern parse(std::string_view symbols);
    /// All 4^T patterns; label of period 1 varies slowest.
    static std::vector<QuadrantPattern> all(std::size_t periods);

    friend bool operator==(const QuadrantPattern&, const QuadrantPattern&) = default;
};

enum class Method { Ccr, Control1, Control2, Proposal, Oracle };

std::string_view to_string(Method method) noexcept;

struct ConcordanceResult {
    double value = 0.0;
    Method method = Method::Ccr;
    /// 0 for ccr, which has no agreement threshold.
    std::size_t m = 0;
    double a = 0.0;
    /// Points for ccr, subjects for control1/control2/proposal, draws for the oracle.
    std::size_t n_used = 0;
    std::size_t n_excluded = 0;
    double numeric_error = 0.0;
};

/// Per-period counts over subjects with no point in the exclusion square.
struct ControlStats {
    std::vector<std::size_t> k;       // agreeing points at period t
    std::vector<std::size_t> n_dag;   // retained subjects at period t
    double p_pooled = 0.0;
    std::vector<double> p_t;
    std::size_t n_subjects = 0;
    std::size_t n_excluded_subjects = 0;
};

/// Conventional concordance rate over all n*T points, excluding points in
/// the closed square of half-width a. Throws UndefinedRateError when every
/// point is excluded.
ConcordanceResult ccr(std::span<const DiffSeries> diffs, double a);

/// Subject-level exclusion then per-period agreement counts. p values are
/// NaN where the corresponding denominator is zero.
ControlStats control_stats(std::span<const DiffSeries> diffs, double a);

/// Binomial tail P(S >= m), S ~ Bin(T, p_pooled).
ConcordanceResult control1(std::span<const DiffSeries> diffs, double a, const AgreementSpec& spec);

/// Poisson-binomial tail P(S >= m) with success probabilities p_t.
ConcordanceResult control2(std::span<const DiffSeries> diffs, double a, const AgreementSpec& spec);

/// P(S >= m) for S ~ Bin(n, p).
double binomial_tail(std::size_t n, double p, std::size_t m);
/// P(S >= m) for S a sum of independent Bernoulli(p[i]).
double poisson_binomial_tail(std::span<const double> p, std::size_t m);

/// Inclusion-exclusion expansion of P(Q_1 ∩ ... ∩ Q_T) where Q_t is the
/// quadrant of label t with its exclusion sub-square removed. Rectangle
/// i corresponds to the subset S whose bit t-1 is set in i: sub-square
/// bounds for t in S, quadrant bounds otherwise, weight (-1)^|S|.
/// Coordinates are ordered X_1..X_T, Y_1..Y_T.
std::vector<SignedRectangle> enumerate_event_rectangles(const QuadrantPattern& pattern, double a);

/// The 2^T - 1 signed terms of P(union of Ez_s): for each nonempty S the
/// pairs (X_s, Y_s), s in S, are bounded to [-a, a]^2 and the rest are free,
/// with weight (-1)^(|S|+1). Same subset order as above.
std::vector<SignedRectangle> exclusion_union_rectangles(std::size_t periods, double a);

struct RateOptions {
    double tol = 1e-6;
    std::int64_t max_evals = std::int64_t{1} << 22;
    std::uint64_t seed = 0;
};

/// 1 - P(union of Ez_s). Throws AllMassExcludedError when the value does
/// not exceed 10 * tol.
ProbEstimate denominator_prob(const GaussianModel& model, double a, const RateOptions& options = {});

/// P[H_t ∩ NEz] for t = 0..T together with P[NEz], sharing one term cache.
struct AgreementDistribution {
    std::vector<ProbEstimate> joint;   // index t: exactly t agreements, outside every square
    ProbEstimate denominator;
    std::size_t terms_touched = 0;     // signed numerator rectangles before caching
    std::size_t unique_terms = 0;      // distinct rectangles integrated (numerator and denominator)
};

/// Throws AllMassExcludedError like denominator_prob.
AgreementDistribution agreement_distribution(const GaussianModel& model, double a, const RateOptions& options = {});

/// P[at least m agreements | NEz] from a precomputed distribution. Throws
/// NumericalInconsistencyError when the ratio leaves [0, 1] by more than
/// its propagated error.
ConcordanceResult proposed_rate(const AgreementDistribution& dist, double a, std::size_t m);

ConcordanceResult proposed_rate(const GaussianModel& model, double a, const AgreementSpec& spec,
                                const RateOptions& options = {});

/// Fits the model on every subject, then evaluates the rate.
ConcordanceResult proposed_rate(std::span<const DiffSeries> diffs, double a, const AgreementSpec& spec,
                                const RateOptions& options = {});

/// Monte Carlo estimate of the same conditional probability from n_draws
/// sampler draws. Throws ParameterError for n_draws < 10^4 and
/// AllMassExcludedError when fewer than 100 draws survive the exclusion.
ConcordanceResult oracle_rate(const GaussianModel& model, double a, const AgreementSpec& spec, std::uint64_t n_draws,
                              std::uint64_t seed);

} // namespace trendcc
