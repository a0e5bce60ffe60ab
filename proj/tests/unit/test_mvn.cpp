#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "trendcc/error.hpp"
#include "trendcc/mvn.hpp"
#include "trendcc/normal.hpp"

using namespace trendcc;

namespace {

Matrix equicorrelated(std::size_t n, double r) {
    Matrix m(n, n, r);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double phi_ref(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

} // namespace

TEST(RectProb, BivariateOrthantIndependent) {
    const GaussianModel m({0, 0}, Matrix::identity(2));
    const std::vector<double> lo{0, 0}, hi{kInf, kInf};
    EXPECT_NEAR(rect_prob(m, lo, hi).value, 0.25, 1e-15);
}

TEST(RectProb, BivariateOrthantCorrelated) {
    const GaussianModel m({0, 0}, equicorrelated(2, 0.5));
    const std::vector<double> lo{0, 0}, hi{kInf, kInf};
    EXPECT_NEAR(rect_prob(m, lo, hi).value, 1.0 / 3.0, 1e-14);
}

TEST(RectProb, WholeSpaceAndEmptyBox) {
    const GaussianModel m({0.3, -1, 2, 0}, equicorrelated(4, 0.2));
    const std::vector<double> lo(4, -kInf), hi(4, kInf);
    EXPECT_EQ(rect_prob(m, lo, hi).value, 1.0);
    std::vector<double> lo2{-1, -1, 0.5, -1}, hi2{1, 1, 0.5, 1};
    EXPECT_EQ(rect_prob(m, lo2, hi2).value, 0.0);
}

TEST(RectProb, OneDimensionIsExact) {
    const GaussianModel m({1.0, 0.0}, Matrix{{4.0, 0.3}, {0.3, 1.0}});
    const std::vector<double> lo{0.0, -kInf}, hi{3.0, kInf};
    const auto p = rect_prob(m, lo, hi);
    EXPECT_NEAR(p.value, phi_ref(1.0) - phi_ref(-0.5), 1e-15);
    EXPECT_EQ(p.abs_error, 0.0);
}

TEST(RectProb, TrivariateOrthantClosedForm) {
    // Fourth coordinate is unbounded and must be marginalised out.
    const Matrix c{{1.0, 0.3, -0.2, 0.1}, {0.3, 1.0, 0.6, 0.2}, {-0.2, 0.6, 1.0, 0.3}, {0.1, 0.2, 0.3, 1.0}};
    const GaussianModel m({0, 0, 0, 5}, c);
    const std::vector<double> lo{0, 0, 0, -kInf}, hi{kInf, kInf, kInf, kInf};
    const double exact = 0.125 + (std::asin(0.3) + std::asin(-0.2) + std::asin(0.6)) / (4.0 * std::numbers::pi);
    const auto p = rect_prob(m, lo, hi, {1e-7, std::int64_t{1} << 24, 3});
    EXPECT_NEAR(p.value, exact, 1e-6);
    EXPECT_LE(p.abs_error, 1e-7);
}

TEST(RectProb, EquicorrelatedHalfOrthants) {
    // With correlation 1/2 the positive orthant of an n-dim normal has mass 1/(n+1).
    for (std::size_t n : {3u, 4u, 5u, 6u}) {
        const std::size_t dim = n + n % 2;
        const GaussianModel m(std::vector<double>(dim, 0.0), equicorrelated(dim, 0.5));
        std::vector<double> lo(dim, 0.0), hi(dim, kInf);
        lo.back() = n % 2 ? -kInf : 0.0;
        EXPECT_NEAR(rect_prob(m, lo, hi, {1e-6, std::int64_t{1} << 24, 0}).value, 1.0 / (n + 1), 3e-6) << n;
    }
}

TEST(RectProb, IndependentBoxIsProduct) {
    const std::vector<double> mu{0.5, -0.3, 1.0, 0.0};
    const std::vector<double> sd{1.0, 2.0, 0.5, 1.5};
    Matrix c(4, 4);
    for (int i = 0; i < 4; ++i) c(i, i) = sd[i] * sd[i];
    const GaussianModel m(mu, c);
    const std::vector<double> lo{-1, 0, 0.5, -kInf}, hi{1, kInf, 1.5, 0.5};
    double exact = 1.0;
    for (int i = 0; i < 4; ++i) exact *= phi_ref((hi[i] - mu[i]) / sd[i]) - phi_ref((lo[i] - mu[i]) / sd[i]);
    EXPECT_NEAR(rect_prob(m, lo, hi, {1e-8, std::int64_t{1} << 22, 0}).value, exact, 1e-8);
}

TEST(RectProb, ReproducibleForFixedSeed) {
    const GaussianModel m({0.2, 0.1, -0.3, 0.4}, equicorrelated(4, 0.3));
    const std::vector<double> lo{0, -1, -kInf, 0}, hi{kInf, 1, 0, 0.5};
    const auto a = rect_prob(m, lo, hi, {1e-5, 1 << 20, 9});
    const auto b = rect_prob(m, lo, hi, {1e-5, 1 << 20, 9});
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.abs_error, b.abs_error);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(RectProb, Errors) {
    const GaussianModel m({0, 0, 0, 0}, Matrix::identity(4));
    const std::vector<double> lo{0, 0}, hi{1, 1};
    EXPECT_THROW(rect_prob(m, lo, hi), DimensionError);
    const std::vector<double> lo3{0, 2, 0, 0}, hi3{1, 1, 1, 1};
    EXPECT_THROW(rect_prob(m, lo3, hi3), ParameterError);
    const std::vector<double> ok{0, 0, 0, 0}, up{1, 1, 1, 1};
    EXPECT_THROW(rect_prob(m, ok, up, {0.0, 1000, 0}), ParameterError);
}

TEST(Sampler, DrawsAreIndexAddressable) {
    const GaussianModel m({1, 2}, Matrix{{1, 0.5}, {0.5, 2}});
    const Matrix z = sample(m, 50, 4);
    GaussianSampler s(m, 4);
    std::vector<double> row(2);
    s.draw(37, row);
    EXPECT_EQ(row[0], z(37, 0));
    EXPECT_EQ(row[1], z(37, 1));
    EXPECT_THROW(sample(m, 0, 4), ParameterError);
}

TEST(Sampler, MomentsMatchModel) {
    const GaussianModel m({1, -2}, Matrix{{1, 0.6}, {0.6, 2}});
    const std::size_t n = 400000;
    const Matrix z = sample(m, n, 8);
    double s0 = 0, s1 = 0, c01 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        s0 += z(i, 0);
        s1 += z(i, 1);
    }
    s0 /= n;
    s1 /= n;
    for (std::size_t i = 0; i < n; ++i) c01 += (z(i, 0) - s0) * (z(i, 1) - s1);
    c01 /= n - 1;
    EXPECT_NEAR(s0, 1.0, 4.0 * std::sqrt(1.0 / n));
    EXPECT_NEAR(s1, -2.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(c01, 0.6, 4.0 * std::sqrt((2.0 + 0.36) / n));
}
