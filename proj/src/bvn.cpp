#include "trendcc/bvn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "trendcc/normal.hpp"

namespace trendcc {

namespace {

struct GaussLegendreHalf {
    std::vector<double> nodes;   // positive nodes on (0, 1)
    std::vector<double> weights;
};

// Positive half of the n-point Gauss-Legendre rule on [-1, 1] (n even).
GaussLegendreHalf gauss_legendre_half(int n) {
    GaussLegendreHalf rule;
    for (int i = 1; i <= n / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes.push_back(x);
        rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    return rule;
}

const GaussLegendreHalf& rule_for(double abs_r) {
    static const std::array<GaussLegendreHalf, 3> rules{gauss_legendre_half(6), gauss_legendre_half(12),
                                                        gauss_legendre_half(20)};
    if (abs_r < 0.3) return rules[0];
    if (abs_r < 0.75) return rules[1];
    return rules[2];
}

} // namespace

double bvn_upper(double h, double k, double r) noexcept {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (h == inf || k == inf) return 0.0;
    if (h == -inf) return k == -inf ? 1.0 : normal_cdf(-k);
    if (k == -inf) return normal_cdf(-h);

    const auto& gl = rule_for(std::abs(r));
    const std::size_t lg = gl.nodes.size();
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (std::size_t i = 0; i < lg; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                const double sn = std::sin(asr * (sgn * gl.nodes[i] + 1.0) / 2.0);
                bvn += gl.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / (2.0 * two_pi) + normal_cdf(-h) * normal_cdf(-k);
        return std::clamp(bvn, 0.0, 1.0);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::abs(r) < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 16.0;
        double asr = -(bs / as + hk) / 2.0;
        if (asr > -100.0)
            bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (hk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(two_pi) * normal_cdf(-b / a);
            bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (std::size_t i = 0; i < lg; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                double xs = a * (sgn * gl.nodes[i] + 1.0);
                xs *= xs;
                const double rs = std::sqrt(1.0 - xs);
                asr = -(bs / xs + hk) / 2.0;
                if (asr > -100.0) {
                    const double sp = 1.0 + c * xs * (1.0 + d * xs);
                    const double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
                    bvn += a * gl.weights[i] * std::exp(asr) * (ep - sp);
                }
            }
        }
        bvn = -bvn / two_pi;
    }
    if (r > 0.0) {
        bvn += normal_cdf(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        const double l = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
        bvn = l - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

double bvn_rect(double lo1, double hi1, double lo2, double hi2, double r) noexcept {
    if (!(lo1 < hi1) || !(lo2 < hi2)) return 0.0;
    const double p = bvn_upper(lo1, lo2, r) - bvn_upper(hi1, lo2, r) - bvn_upper(lo1, hi2, r) + bvn_upper(hi1, hi2, r);
    return std::clamp(p, 0.0, 1.0);
}

} // namespace trendcc
