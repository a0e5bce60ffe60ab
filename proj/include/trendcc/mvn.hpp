#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "trendcc/core.hpp"
#include "trendcc/matrix.hpp"

namespace trendcc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Axis-aligned box with a +1/-1 inclusion-exclusion weight. Bounds may be
/// infinite. Whether an edge is open or closed does not matter under a
/// continuous model.
struct SignedRectangle {
    std::vector<double> lower;
    std::vector<double> upper;
    int weight = 1;

    std::size_t dim() const noexcept { return lower.size(); }
    /// Throws DimensionError / ParameterError on malformed bounds.
    void validate(std::size_t expected_dim) const;
    friend bool operator==(const SignedRectangle&, const SignedRectangle&) = default;
};

struct ProbEstimate {
    double value = 0.0;
    /// Three standard errors over the random lattice shifts.
    double abs_error = 0.0;
    /// Integrand evaluations; equals the evaluation cap when the error
    /// target was not reached.
    std::int64_t evaluations = 0;
};

struct IntegrationOptions {
    double tol = 1e-6;
    std::int64_t max_evals = std::int64_t{1} << 22;
    std::uint64_t seed = 0;
};

/// Number of independent random shifts of the lattice per refinement round.
inline constexpr int kLatticeShifts = 12;

/// P(lower < Z < upper) for Z ~ N(model.mean, model.cov).
///
/// Uses the separation-of-variables transform: variables with two infinite
/// bounds are marginalised out, the rest are reordered so that the most
/// constrained come first (expected truncated mass, ascending), factored,
/// and the remaining (k-1)-dimensional integral over the unit cube is
/// evaluated with a Korobov rank-1 lattice under the tent periodisation,
/// randomised by kLatticeShifts independent shifts with antithetic pairs.
/// The lattice size doubles each round until 3 standard errors of that
/// round fall below tol or max_evals is spent. Zero-, one- and
/// two-dimensional cases use closed forms.
ProbEstimate rect_prob(const GaussianModel& model, std::span<const double> lower, std::span<const double> upper,
                       const IntegrationOptions& options = {});

inline ProbEstimate rect_prob(const GaussianModel& model, const SignedRectangle& rect,
                              const IntegrationOptions& options = {}) {
    rect.validate(model.dim());
    return rect_prob(model, rect.lower, rect.upper, options);
}

/// Generates draws mean + L * eps where eps comes from the Philox stream
/// keyed by seed with the draw index as stream id. Draw i is therefore the
/// same no matter how many draws are requested or in which order.
class GaussianSampler {
public:
    GaussianSampler(const GaussianModel& model, std::uint64_t seed) : model_(&model), seed_(seed) {}

    /// Writes draw number index into out (size model.dim()).
    void draw(std::uint64_t index, std::span<double> out) const;

private:
    const GaussianModel* model_;
    std::uint64_t seed_;
};

/// n draws as the rows of an n x dim matrix. Throws ParameterError for n < 1.
Matrix sample(const GaussianModel& model, std::size_t n, std::uint64_t seed);

} // namespace trendcc
