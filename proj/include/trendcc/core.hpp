#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendcc/matrix.hpp"

namespace trendcc {

/// Raw values of the reference ("gold") and experimental methods for one
/// subject at T+1 consecutive time points.
struct MeasurementSeries {
    std::string subject_id;
    std::vector<double> x_raw;
    std::vector<double> y_raw;

    /// Throws DataError unless lengths match, are >= 2 and all values are finite.
    void validate() const;
};

/// Sequential differences of one subject: the four-quadrant plot coordinates.
struct DiffSeries {
    std::string subject_id;
    std::vector<double> x;
    std::vector<double> y;

    std::size_t periods() const noexcept { return x.size(); }
    void validate() const;
};

DiffSeries compute_differences(const MeasurementSeries& series);
std::vector<DiffSeries> compute_differences(std::span<const MeasurementSeries> series);

/// Number of differences shared by every series; throws DataError on mismatch
/// or an empty list.
std::size_t common_periods(std::span<const DiffSeries> diffs);

/// Multivariate normal model of Z = (X_1..X_T, Y_1..Y_T). Construction
/// validates symmetry and positive definiteness, so every instance can be
/// factored and sampled.
class GaussianModel {
public:
    /// Throws DimensionError on shape problems, ParameterError on asymmetry
    /// or non-finite entries, DegenerateModelError when not positive definite.
    GaussianModel(std::vector<double> mean, Matrix cov);

    std::size_t dim() const noexcept { return mean_.size(); }
    std::size_t periods() const noexcept { return mean_.size() / 2; }
    const std::vector<double>& mean() const noexcept { return mean_; }
    const Matrix& cov() const noexcept { return cov_; }
    /// Cholesky factor of cov().
    const Matrix& factor() const noexcept { return factor_; }

    static constexpr std::size_t kMaxDim = 32;

private:
    std::vector<double> mean_;
    Matrix cov_;
    Matrix factor_;
};

enum class Quadrant { A, B, C, D };

/// A and B are agreement quadrants; C and D disagreement.
constexpr bool is_agreement(Quadrant q) noexcept { return q == Quadrant::A || q == Quadrant::B; }
char quadrant_symbol(Quadrant q) noexcept;
Quadrant quadrant_from_symbol(char c);

enum class PointKind { AgreeOutside, DisagreeOutside, ExclAgree, ExclDisagree };

struct PointClass {
    PointKind kind;
    Quadrant quadrant;

    bool excluded() const noexcept { return kind == PointKind::ExclAgree || kind == PointKind::ExclDisagree; }
    bool agreement() const noexcept { return is_agreement(quadrant); }
    friend bool operator==(const PointClass&, const PointClass&) = default;
};

std::string_view to_string(PointKind kind) noexcept;

/// Quadrants split on >= 0 / < 0; the exclusion square |x| <= a, |y| <= a
/// is closed. Throws ParameterError for a < 0 or NaN input.
PointClass classify_point(double x, double y, double a);

/// Required number of agreeing periods out of T.
struct AgreementSpec {
    std::size_t periods;
    std::size_t min_agreements;

    /// Throws ParameterError unless 1 <= min_agreements <= periods.
    void validate() const;
};

/// Sample mean and unbiased covariance of z_i = (x_i1..x_iT, y_i1..y_iT).
/// Throws EstimationError for fewer than two subjects and DegenerateModelError
/// (with eigenvalues) when the sample covariance is not positive definite.
GaussianModel estimate_model(std::span<const DiffSeries> diffs);

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). Throws DataError on an empty sample and
/// ParameterError unless 0 <= q <= 1.
double quantile_type7(std::vector<double> values, double q);

/// Subjects below 2T+1 make the covariance estimate fragile.
constexpr std::size_t recommended_min_subjects(std::size_t periods) noexcept { return 2 * periods + 1; }

} // namespace trendcc
