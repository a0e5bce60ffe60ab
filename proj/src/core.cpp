#include "trendcc/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trendcc/error.hpp"

namespace trendcc {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::string describe(std::span<const double> values) {
    std::ostringstream os;
    os.precision(6);
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << values[i];
    os << ']';
    return os.str();
}

} // namespace

void MeasurementSeries::validate() const {
    if (x_raw.size() != y_raw.size())
        throw DataError("subject " + subject_id + ": methods have different numbers of time points");
    if (x_raw.size() < 2) throw DataError("subject " + subject_id + ": at least two time points are required");
    if (!all_finite(x_raw) || !all_finite(y_raw)) throw DataError("subject " + subject_id + ": non-finite value");
}

void DiffSeries::validate() const {
    if (x.size() != y.size()) throw DataError("subject " + subject_id + ": difference vectors differ in length");
    if (x.empty()) throw DataError("subject " + subject_id + ": no differences");
}

DiffSeries compute_differences(const MeasurementSeries& series) {
    series.validate();
    const std::size_t periods = series.x_raw.size() - 1;
    DiffSeries d{series.subject_id, std::vector<double>(periods), std::vector<double>(periods)};
    for (std::size_t t = 0; t < periods; ++t) {
        d.x[t] = series.x_raw[t + 1] - series.x_raw[t];
        d.y[t] = series.y_raw[t + 1] - series.y_raw[t];
    }
    return d;
}

std::vector<DiffSeries> compute_differences(std::span<const MeasurementSeries> series) {
    std::vector<DiffSeries> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(compute_differences(s));
    return out;
}

std::size_t common_periods(std::span<const DiffSeries> diffs) {
    if (diffs.empty()) throw DataError("no subjects");
    const std::size_t periods = diffs.front().periods();
    for (const auto& d : diffs) {
        d.validate();
        if (d.periods() != periods)
            throw DataError("subject " + d.subject_id + " has " + std::to_string(d.periods()) +
                            " differences, expected " + std::to_string(periods) + "; unequal T is not supported");
    }
    return periods;
}

GaussianModel::GaussianModel(std::vector<double> mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    const std::size_t n = mean_.size();
    if (n == 0 || n % 2 != 0) throw DimensionError("model dimension must be a positive even number (2T)");
    if (n > kMaxDim) throw DimensionError("model dimension " + std::to_string(n) + " exceeds the supported maximum 32");
    if (cov_.rows() != n || cov_.cols() != n) throw DimensionError("covariance shape does not match the mean vector");
    if (!all_finite(mean_)) throw ParameterError("mean vector has a non-finite entry");
    for (std::size_t i = 0; i < n; ++i)
        if (!all_finite(cov_.row(i))) throw ParameterError("covariance has a non-finite entry");
    if (asymmetry(cov_) > 1e-10) throw ParameterError("covariance matrix is not symmetric");
    try {
        factor_ = cholesky(cov_);
    } catch (const DecompositionError& e) {
        const auto ev = symmetric_eigenvalues(cov_);
        throw DegenerateModelError(ev, "covariance is not positive definite (pivot " + std::to_string(e.pivot()) +
                                           "); eigenvalues " + describe(ev));
    }
}

char quadrant_symbol(Quadrant q) noexcept {
    switch (q) {
    case Quadrant::A: return 'A';
    case Quadrant::B: return 'B';
    case Quadrant::C: return 'C';
    case Quadrant::D: return 'D';
    }
    return '?';
}

Quadrant quadrant_from_symbol(char c) {
    switch (c) {
    case 'A': return Quadrant::A;
    case 'B': return Quadrant::B;
    case 'C': return Quadrant::C;
    case 'D': return Quadrant::D;
    default: throw ParameterError(std::string("unknown quadrant symbol '") + c + "'");
    }
}

std::string_view to_string(PointKind kind) noexcept {
    switch (kind) {
    case PointKind::AgreeOutside: return "agree";
    case PointKind::DisagreeOutside: return "disagree";
    case PointKind::ExclAgree: return "excluded-agree";
    case PointKind::ExclDisagree: return "excluded-disagree";
    }
    return "?";
}

PointClass classify_point(double x, double y, double a) {
    if (!(a >= 0.0)) throw ParameterError("exclusion half-width must be non-negative");
    if (std::isnan(x) || std::isnan(y)) throw ParameterError("cannot classify a NaN coordinate");
    Quadrant q;
    if (x >= 0.0)
        q = y >= 0.0 ? Quadrant::A : Quadrant::D;
    else
        q = y < 0.0 ? Quadrant::B : Quadrant::C;
    const bool inside = std::abs(x) <= a && std::abs(y) <= a;
    const bool agree = is_agreement(q);
    PointKind kind = inside ? (agree ? PointKind::ExclAgree : PointKind::ExclDisagree)
                            : (agree ? PointKind::AgreeOutside : PointKind::DisagreeOutside);
    return {kind, q};
}

void AgreementSpec::validate() const {
    if (periods == 0) throw ParameterError("number of differences T must be at least 1");
    if (min_agreements < 1 || min_agreements > periods)
        throw ParameterError("minimum agreement count m=" + std::to_string(min_agreements) + " must lie in [1, " +
                             std::to_string(periods) + "]");
}

GaussianModel estimate_model(std::span<const DiffSeries> diffs) {
    if (diffs.size() < 2) throw EstimationError("at least two subjects are required to estimate the model");
    const std::size_t periods = common_periods(diffs);
    const std::size_t dim = 2 * periods;
    const double n = static_cast<double>(diffs.size());

    std::vector<double> mean(dim, 0.0);
    for (const auto& d : diffs)
        for (std::size_t t = 0; t < periods; ++t) {
            mean[t] += d.x[t];
            mean[periods + t] += d.y[t];
        }
    for (double& m : mean) m /= n;

    Matrix cov(dim, dim);
    std::vector<double> z(dim);
    for (const auto& d : diffs) {
        for (std::size_t t = 0; t < periods; ++t) {
            z[t] = d.x[t] - mean[t];
            z[periods + t] = d.y[t] - mean[periods + t];
        }
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j <= i; ++j) cov(i, j) += z[i] * z[j];
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            cov(i, j) /= n - 1.0;
            cov(j, i) = cov(i, j);
        }
    return GaussianModel(std::move(mean), std::move(cov));
}

double quantile_type7(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

} // namespace trendcc
