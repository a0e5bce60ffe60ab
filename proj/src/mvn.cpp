#include "trendcc/mvn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "trendcc/bvn.hpp"
#include "trendcc/error.hpp"
#include "trendcc/normal.hpp"
#include "trendcc/rng.hpp"

namespace trendcc {

void SignedRectangle::validate(std::size_t expected_dim) const {
    if (lower.size() != upper.size()) throw DimensionError("rectangle bounds differ in length");
    if (lower.size() != expected_dim)
        throw DimensionError("rectangle has dimension " + std::to_string(lower.size()) + ", model has " +
                             std::to_string(expected_dim));
    if (weight != 1 && weight != -1) throw ParameterError("rectangle weight must be +1 or -1");
    for (std::size_t k = 0; k < lower.size(); ++k)
        if (std::isnan(lower[k]) || std::isnan(upper[k]) || lower[k] > upper[k])
            throw ParameterError("rectangle bound " + std::to_string(k) + " has lower > upper");
}

namespace {

// Outputs of the quantile are clipped here so that the linear combinations
// of later variables never see an infinity.
constexpr double kQuantileClip = 37.5;

// Lattice size of the first refinement round (rounded up to a prime).
constexpr std::int64_t kFirstLatticeSize = 7;

// Reported error of the closed-form bivariate path.
constexpr double kBivariateError = 1e-14;

// Standardised, reordered and factored integration problem of dimension k >= 2.
struct Problem {
    std::size_t k = 0;
    std::vector<double> chol;       // k x k lower triangular, row-major
    std::vector<double> inv_diag;   // 1 / chol(i,i)
    std::vector<double> lo, hi;     // bounds after centring
    double first_lo = 0.0, first_hi = 0.0; // standardised bounds of variable 0
};

struct Slice {
    double d;        // lower CDF value (or upper-tail form, see `upper`)
    double e;
    bool upper;      // true when both bounds are positive and tails are used
};

inline double mass_and_slice(double lo, double hi, Slice& s) {
    if (lo > 0.0) {
        s.d = normal_cdf(-hi);
        s.e = normal_cdf(-lo);
        s.upper = true;
    } else {
        s.d = normal_cdf(lo);
        s.e = normal_cdf(hi);
        s.upper = false;
    }
    return s.e - s.d;
}

inline double draw_from_slice(const Slice& s, double w) {
    double y = s.upper ? -normal_quantile(s.d + (1.0 - w) * (s.e - s.d)) : normal_quantile(s.d + w * (s.e - s.d));
    return std::clamp(y, -kQuantileClip, kQuantileClip);
}

double integrand(const Problem& p, const double* w, double* y) {
    Slice s;
    double f = mass_and_slice(p.first_lo, p.first_hi, s);
    for (std::size_t i = 1; i < p.k && f > 0.0; ++i) {
        y[i - 1] = draw_from_slice(s, w[i - 1]);
        const double* row = p.chol.data() + i * p.k;
        double shift = 0.0;
        for (std::size_t j = 0; j < i; ++j) shift += row[j] * y[j];
        const double lo = (p.lo[i] - shift) * p.inv_diag[i];
        const double hi = (p.hi[i] - shift) * p.inv_diag[i];
        f *= mass_and_slice(lo, hi, s);
    }
    return f;
}

// Genz-Bretz variable prioritisation fused with the Cholesky factorisation.
Problem prepare(Matrix cov, std::vector<double> lo, std::vector<double> hi) {
    const std::size_t k = lo.size();
    Problem p;
    p.k = k;
    p.chol.assign(k * k, 0.0);
    std::vector<double> y(k, 0.0);
    auto L = [&](std::size_t i, std::size_t j) -> double& { return p.chol[i * k + j]; };

    for (std::size_t i = 0; i < k; ++i) {
        std::size_t best = i;
        double best_mass = kInf;
        double best_sigma = 0.0, best_a = 0.0, best_b = 0.0;
        for (std::size_t j = i; j < k; ++j) {
            double var = cov(j, j);
            double shift = 0.0;
            for (std::size_t m = 0; m < i; ++m) {
                var -= L(j, m) * L(j, m);
                shift += L(j, m) * y[m];
            }
            if (!(var > 1e-12 * cov(j, j))) throw DecompositionError(i + 1, var);
            const double sigma = std::sqrt(var);
            const double a = (lo[j] - shift) / sigma;
            const double b = (hi[j] - shift) / sigma;
            const double mass = normal_interval(a, b);
            if (mass < best_mass) {
                best_mass = mass;
                best = j;
                best_sigma = sigma;
                best_a = a;
                best_b = b;
            }
        }
        if (best != i) {
            std::swap(lo[i], lo[best]);
            std::swap(hi[i], hi[best]);
            for (std::size_t m = 0; m < k; ++m) std::swap(cov(i, m), cov(best, m));
            for (std::size_t m = 0; m < k; ++m) std::swap(cov(m, i), cov(m, best));
            for (std::size_t m = 0; m < i; ++m) std::swap(L(i, m), L(best, m));
        }
        L(i, i) = best_sigma;
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = cov(j, i);
            for (std::size_t m = 0; m < i; ++m) s -= L(j, m) * L(i, m);
            L(j, i) = s / best_sigma;
        }
        // Mean of the truncated standard normal on (a, b), mapped back.
        double t;
        if (best_mass > 1e-300) {
            t = (normal_pdf(best_a) - normal_pdf(best_b)) / best_mass;
        } else if (std::isinf(best_a)) {
            t = best_b;
        } else if (std::isinf(best_b)) {
            t = best_a;
        } else {
            t = 0.5 * (best_a + best_b);
        }
        y[i] = t;
    }

    p.inv_diag.resize(k);
    for (std::size_t i = 0; i < k; ++i) p.inv_diag[i] = 1.0 / L(i, i);
    p.first_lo = lo[0] * p.inv_diag[0];
    p.first_hi = hi[0] * p.inv_diag[0];
    p.lo = std::move(lo);
    p.hi = std::move(hi);
    return p;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

struct Lattice {
    std::int64_t n = 0;
    std::vector<std::int64_t> z;
};

double p2_criterion(std::int64_t n, const std::vector<std::int64_t>& z) {
    constexpr double c = 2.0 * std::numbers::pi * std::numbers::pi;
    double acc = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        double prod = 1.0;
        for (std::int64_t zj : z) {
            const double x = static_cast<double>((k * zj) % n) / static_cast<double>(n);
            prod *= 1.0 + c * (x * x - x + 1.0 / 6.0);
        }
        acc += prod;
    }
    return acc / static_cast<double>(n) - 1.0;
}

// Rank-1 Korobov lattice with the smallest P2 discrepancy among the
// candidate multipliers. Cached per (size, dimension).

const Lattice& korobov_lattice(std::int64_t min_points, std::size_t dims) {
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, std::size_t>, Lattice> cache;
    std::lock_guard lock(mu);
    std::int64_t n = min_points;
    while (!is_prime(n)) ++n;
    auto [it, inserted] = cache.try_emplace({n, dims});
    if (!inserted) return it->second;
    Lattice lat;
    lat.n = n;
    auto make = [&](std::int64_t a) {
        std::vector<std::int64_t> z(dims);
        std::int64_t v = 1;
        for (std::size_t j = 0; j < dims; ++j) {
            z[j] = v;
            v = (v * a) % n;
        }
        return z;
    };
    if (dims == 1) {
        lat.z = {1};
    } else {
        std::vector<std::int64_t> candidates;
        if (n <= 2000) {
            for (std::int64_t a = 2; a <= n / 2; ++a) candidates.push_back(a);
        } else {
            const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
            for (int j = 1; j <= 48; ++j) {
                double f = j * phi;
                f -= std::floor(f);
                candidates.push_back(2 + static_cast<std::int64_t>(f * static_cast<double>(n - 3)));
            }
        }
        double best = kInf;
        for (std::int64_t a : candidates) {
            auto z = make(a);
            const double crit = p2_criterion(n, z);
            if (crit < best) {
                best = crit;
                lat.z = std::move(z);
            }
        }
    }
    it->second = std::move(lat);
    return it->second;
}

ProbEstimate integrate(const Problem& p, const IntegrationOptions& opt) {
    const std::size_t dims = p.k - 1;
    std::vector<double> shift(dims), w(dims), wa(dims), y(p.k);

    double estimate = 0.0;
    double error = kInf;
    std::int64_t evals = 0;
    std::int64_t points = kFirstLatticeSize;

    for (std::uint64_t round = 0; error > opt.tol; ++round, points *= 2) {
        const std::int64_t remaining = opt.max_evals - evals;
        if (remaining / (2 * kLatticeShifts) < points) break;
        const Lattice& lat = korobov_lattice(points, dims);
        const std::int64_t n = lat.n;
        if (2 * kLatticeShifts * n > remaining) break;

        CounterRng rng(opt.seed, round);
        std::array<double, kLatticeShifts> shift_means{};
        for (int r = 0; r < kLatticeShifts; ++r) {
            for (auto& s : shift) s = rng.uniform();
            double acc = 0.0;
            for (std::int64_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < dims; ++j) {
                    double x = static_cast<double>((i * lat.z[j]) % n) / static_cast<double>(n) + shift[j];
                    x -= std::floor(x);
                    w[j] = std::abs(2.0 * x - 1.0);
                    wa[j] = 1.0 - w[j];
                }
                acc += integrand(p, w.data(), y.data()) + integrand(p, wa.data(), y.data());
            }
            shift_means[r] = acc / (2.0 * static_cast<double>(n));
        }
        evals += 2 * kLatticeShifts * n;

        double mean = 0.0;
        for (double m : shift_means) mean += m;
        mean /= kLatticeShifts;
        double ss = 0.0;
        for (double m : shift_means) ss += (m - mean) * (m - mean);
        estimate = mean;
        error = 3.0 * std::sqrt(ss / (kLatticeShifts - 1) / kLatticeShifts);
    }

    ProbEstimate out;
    out.value = std::clamp(estimate, 0.0, 1.0);
    out.abs_error = error;
    out.evaluations = error > opt.tol ? opt.max_evals : evals;
    return out;
}

} // namespace

ProbEstimate rect_prob(const GaussianModel& model, std::span<const double> lower, std::span<const double> upper,
                       const IntegrationOptions& options) {
    const std::size_t dim = model.dim();
    if (lower.size() != dim || upper.size() != dim)
        throw DimensionError("rectangle dimension does not match model dimension " + std::to_string(dim));
    if (!(options.tol > 0.0)) throw ParameterError("integration tolerance must be positive");
    if (options.max_evals < 1) throw ParameterError("evaluation budget must be positive");

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < dim; ++i) {
        if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i])
            throw ParameterError("rectangle bound " + std::to_string(i) + " has lower > upper");
        if (lower[i] == upper[i]) return {0.0, 0.0, 0};
        if (!(std::isinf(lower[i]) && std::isinf(upper[i]))) keep.push_back(i);
    }
    if (keep.empty()) return {1.0, 0.0, 0};

    const auto& mean = model.mean();
    const auto& cov = model.cov();
    const std::size_t k = keep.size();
    std::vector<double> lo(k), hi(k);
    Matrix sub(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        lo[a] = lower[keep[a]] - mean[keep[a]];
        hi[a] = upper[keep[a]] - mean[keep[a]];
        for (std::size_t b = 0; b < k; ++b) sub(a, b) = cov(keep[a], keep[b]);
    }

    if (k == 1) {
        const double sd = std::sqrt(sub(0, 0));
        return {std::clamp(normal_interval(lo[0] / sd, hi[0] / sd), 0.0, 1.0), 0.0, 0};
    }
    if (k == 2) {
        const double s0 = std::sqrt(sub(0, 0)), s1 = std::sqrt(sub(1, 1));
        const double r = std::clamp(sub(0, 1) / (s0 * s1), -1.0, 1.0);
        return {bvn_rect(lo[0] / s0, hi[0] / s0, lo[1] / s1, hi[1] / s1, r), kBivariateError, 0};
    }
    return integrate(prepare(std::move(sub), std::move(lo), std::move(hi)), options);
}

void GaussianSampler::draw(std::uint64_t index, std::span<double> out) const {
    const std::size_t dim = model_->dim();
    if (out.size() != dim) throw DimensionError("sample buffer has the wrong dimension");
    std::array<double, GaussianModel::kMaxDim> eps{};
    CounterRng rng(seed_, index);
    for (std::size_t j = 0; j < dim; ++j) eps[j] = rng.normal();
    const Matrix& l = model_->factor();
    const auto& mean = model_->mean();
    for (std::size_t i = 0; i < dim; ++i) {
        double v = mean[i];
        for (std::size_t j = 0; j <= i; ++j) v += l(i, j) * eps[j];
        out[i] = v;
    }
}

Matrix sample(const GaussianModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ParameterError("sample size must be at least 1");
    Matrix draws(n, model.dim());
    GaussianSampler sampler(model, seed);
    for (std::size_t i = 0; i < n; ++i) sampler.draw(i, draws.row(i));
    return draws;
}

} // namespace trendcc
