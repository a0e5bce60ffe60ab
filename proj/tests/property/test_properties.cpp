// Randomised invariants. Every property runs at least kCases generated cases
// from a fixed seed, so failures are reproducible.
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "trendcc/analysis.hpp"
#include "trendcc/concordance.hpp"
#include "trendcc/dataset.hpp"
#include "trendcc/error.hpp"
#include "trendcc/mvn.hpp"
#include "trendcc/rng.hpp"
#include "trendcc/roc.hpp"
#include "trendcc/sim.hpp"

using namespace trendcc;

namespace {

constexpr int kCases = 1000;

class Gen {
public:
    explicit Gen(std::uint64_t stream) : rng_(0x5eed, stream) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
    double normal() { return rng_.normal(); }
    std::size_t index(std::size_t bound) { return static_cast<std::size_t>(rng_.below(bound)); }
    bool coin() { return rng_.below(2) == 1; }

    // Positive definite with unit-ish scale: B B' + 0.2 I.
    Matrix covariance(std::size_t d) {
        Matrix b(d, d), c(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) b(i, j) = 0.6 * normal();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double s = i == j ? 0.2 : 0.0;
                for (std::size_t k = 0; k < d; ++k) s += b(i, k) * b(j, k);
                c(i, j) = s;
            }
        return c;
    }

    GaussianModel model(std::size_t periods) {
        std::vector<double> mu(2 * periods);
        for (auto& v : mu) v = uniform(-1.5, 1.5);
        return GaussianModel(mu, covariance(2 * periods));
    }

    std::vector<DiffSeries> diffs(std::size_t n, std::size_t periods, double scale = 1.0) {
        std::vector<DiffSeries> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i].subject_id = "s" + std::to_string(i);
            for (std::size_t t = 0; t < periods; ++t) {
                const double x = scale * normal();
                out[i].x.push_back(x);
                out[i].y.push_back(0.7 * x + scale * 0.7 * normal());
            }
        }
        return out;
    }

    // Random box; each side is finite or infinite.
    void box(std::size_t d, std::vector<double>& lo, std::vector<double>& hi) {
        lo.assign(d, -kInf);
        hi.assign(d, kInf);
        for (std::size_t i = 0; i < d; ++i) {
            const double u = uniform(-2, 2), v = uniform(-2, 2);
            if (index(3)) lo[i] = std::min(u, v);
            if (index(3)) hi[i] = std::max(u, v) + (lo[i] == -kInf ? 0.0 : 0.01);
        }
    }

private:
    CounterRng rng_;
};

IntegrationOptions fast(std::uint64_t seed) { return {1e-4, std::int64_t{1} << 18, seed}; }

// Reported errors are three standard errors estimated from a dozen shifts,
// so comparisons between independent estimates allow twice their sum.
constexpr double kErrorSlack = 2.0;

} // namespace

TEST(Differences, Telescope) {
    Gen g(1);
    for (int c = 0; c < kCases; ++c) {
        const std::size_t k = 2 + g.index(6);
        MeasurementSeries s{"s", {}, {}};
        for (std::size_t i = 0; i < k; ++i) {
            s.x_raw.push_back(std::round(g.uniform(80, 200)));
            s.y_raw.push_back(std::round(g.uniform(80, 200)));
        }
        const auto d = compute_differences(s);
        ASSERT_EQ(d.periods(), k - 1);
        EXPECT_EQ(std::accumulate(d.x.begin(), d.x.end(), 0.0), s.x_raw.back() - s.x_raw.front());
        EXPECT_EQ(std::accumulate(d.y.begin(), d.y.end(), 0.0), s.y_raw.back() - s.y_raw.front());
    }
}

TEST(Classify, TotalAndConsistent) {
    Gen g(2);
    for (int c = 0; c < 20 * kCases; ++c) {
        const double x = g.index(10) ? g.uniform(-3, 3) : 0.0, y = g.index(10) ? g.uniform(-3, 3) : 0.0;
        const double a = g.coin() ? g.uniform(0, 2) : 0.0;
        const auto p = classify_point(x, y, a);
        EXPECT_EQ(p.excluded(), std::abs(x) <= a && std::abs(y) <= a);
        EXPECT_EQ(p.agreement(), (x >= 0) == (y >= 0));
        const Quadrant want = x >= 0 ? (y >= 0 ? Quadrant::A : Quadrant::D) : (y >= 0 ? Quadrant::C : Quadrant::B);
        EXPECT_EQ(p.quadrant, want);
        const PointKind kind = p.excluded() ? (p.agreement() ? PointKind::ExclAgree : PointKind::ExclDisagree)
                                            : (p.agreement() ? PointKind::AgreeOutside : PointKind::DisagreeOutside);
        EXPECT_EQ(p.kind, kind);
    }
}

TEST(EstimateModel, PermutationAndTranslation) {
    Gen g(3);
    for (int c = 0; c < kCases; ++c) {
        const std::size_t periods = 1 + g.index(3), n = 2 * periods + 2 + g.index(20);
        auto d = g.diffs(n, periods);
        const GaussianModel base = estimate_model(d);
        auto shuffled = d;
        for (std::size_t i = n - 1; i > 0; --i) std::swap(shuffled[i], shuffled[g.index(i + 1)]);
        std::vector<double> shift(2 * periods);
        for (auto& s : shift) s = g.uniform(-5, 5);
        for (auto& s : shuffled)
            for (std::size_t t = 0; t < periods; ++t) {
                s.x[t] += shift[t];
                s.y[t] += shift[periods + t];
            }
        const GaussianModel moved = estimate_model(shuffled);
        for (std::size_t i = 0; i < 2 * periods; ++i) {
            EXPECT_NEAR(moved.mean()[i], base.mean()[i] + shift[i], 1e-11);
            for (std::size_t j = 0; j < 2 * periods; ++j) EXPECT_NEAR(moved.cov()(i, j), base.cov()(i, j), 1e-10);
        }
    }
}

TEST(RectProb, MonotoneInTheBox) {
    Gen g(4);
    std::vector<double> lo, hi;
    for (int c = 0; c < kCases; ++c) {
        const auto m = g.model(2);
        g.box(4, lo, hi);
        auto lo2 = lo, hi2 = hi;
        const std::size_t i = g.index(4);
        if (std::isfinite(lo2[i])) lo2[i] -= g.uniform(0, 1);
        else hi2[i] += g.uniform(0, 1);
        const auto p = rect_prob(m, lo, hi, fast(c)), q = rect_prob(m, lo2, hi2, fast(c));
        EXPECT_LE(p.value, q.value + kErrorSlack * (p.abs_error + q.abs_error) + 1e-12);
        EXPECT_GE(p.value, -p.abs_error);
        EXPECT_LE(q.value, 1.0 + q.abs_error);
    }
}

TEST(RectProb, SplittingABoxAddsUp) {
    Gen g(5);
    std::vector<double> lo, hi;
    for (int c = 0; c < kCases; ++c) {
        const auto m = g.model(2);
        g.box(4, lo, hi);
        const std::size_t i = g.index(4);
        const double cut = std::isfinite(lo[i]) ? (std::isfinite(hi[i]) ? 0.5 * (lo[i] + hi[i]) : lo[i] + 0.5)
                                                : (std::isfinite(hi[i]) ? hi[i] - 0.5 : g.uniform(-1, 1));
        auto hi_a = hi, lo_b = lo;
        hi_a[i] = cut;
        lo_b[i] = cut;
        const auto whole = rect_prob(m, lo, hi, fast(c));
        const auto pa = rect_prob(m, lo, hi_a, fast(c + 1)), pb = rect_prob(m, lo_b, hi, fast(c + 2));
        EXPECT_NEAR(pa.value + pb.value, whole.value, kErrorSlack * (whole.abs_error + pa.abs_error + pb.abs_error) + 1e-12);
    }
}

TEST(RectProb, TranslationInvariant) {
    Gen g(6);
    std::vector<double> lo, hi;
    for (int c = 0; c < kCases; ++c) {
        const auto m = g.model(2);
        g.box(4, lo, hi);
        std::vector<double> mu = m.mean();
        auto lo2 = lo, hi2 = hi;
        for (std::size_t i = 0; i < 4; ++i) {
            const double s = g.uniform(-3, 3);
            mu[i] += s;
            lo2[i] += s;
            hi2[i] += s;
        }
        const GaussianModel moved(mu, m.cov());
        const auto p = rect_prob(m, lo, hi, fast(c)), q = rect_prob(moved, lo2, hi2, fast(c + 7));
        EXPECT_NEAR(p.value, q.value, kErrorSlack * (p.abs_error + q.abs_error) + 1e-12);
    }
}

TEST(RectProb, AgreesWithSamplerFrequency) {
    Gen g(7);
    std::vector<double> lo, hi;
    const std::size_t draws = 4000;
    std::vector<double> z(4);
    for (int c = 0; c < kCases; ++c) {
        const auto m = g.model(2);
        g.box(4, lo, hi);
        const double p = rect_prob(m, lo, hi, {1e-5, std::int64_t{1} << 20, 0}).value;
        GaussianSampler s(m, c);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < draws; ++i) {
            s.draw(i, z);
            bool in = true;
            for (std::size_t k = 0; k < 4 && in; ++k) in = z[k] > lo[k] && z[k] < hi[k];
            hits += in;
        }
        const double se = std::sqrt(std::max(p * (1 - p), 1e-4) / draws);
        EXPECT_NEAR(static_cast<double>(hits) / draws, p, 5.0 * se + 1e-5);
    }
}

TEST(Proposal, MonotoneInThresholdAndComplete) {
    Gen g(8);
    for (int c = 0; c < kCases; ++c) {
        const auto m = g.model(2);
        const double a = g.coin() ? 0.0 : g.uniform(0, 0.8);
        const auto dist = agreement_distribution(m, a, {1e-4, std::int64_t{1} << 18, std::uint64_t(c)});
        const auto r1 = proposed_rate(dist, a, 1), r2 = proposed_rate(dist, a, 2);
        EXPECT_GE(r1.value + kErrorSlack * (r1.numeric_error + r2.numeric_error), r2.value);
        double sum = 0.0, err = dist.denominator.abs_error;
        for (const auto& j : dist.joint) {
            sum += j.value;
            err += j.abs_error;
        }
        EXPECT_NEAR(sum, dist.denominator.value, kErrorSlack * err + 1e-12);
        for (const auto* r : {&r1, &r2}) {
            EXPECT_GE(r->value, 0.0);
            EXPECT_LE(r->value, 1.0);
        }
    }
}

TEST(Proposal, SignFlipSymmetry) {
    Gen g(9);
    for (int c = 0; c < kCases; ++c) {
        const auto m = g.model(2);
        std::vector<double> neg = m.mean();
        for (auto& v : neg) v = -v;
        const GaussianModel flipped(neg, m.cov());
        const double a = g.uniform(0, 0.8);
        const AgreementSpec spec{2, 1 + g.index(2)};
        const RateOptions opt{1e-4, std::int64_t{1} << 18, std::uint64_t(c)};
        const auto p = proposed_rate(m, a, spec, opt), q = proposed_rate(flipped, a, spec, opt);
        EXPECT_NEAR(p.value, q.value, kErrorSlack * (p.numeric_error + q.numeric_error) + 1e-12);
    }
}

TEST(Estimators, StayInUnitInterval) {
    Gen g(10);
    for (int c = 0; c < kCases; ++c) {
        const std::size_t periods = 1 + g.index(4);
        const auto d = g.diffs(3 + g.index(30), periods);
        const double a = g.uniform(0, 1);
        const AgreementSpec spec{periods, 1 + g.index(periods)};
        try {
            const double v = ccr(d, a).value;
            EXPECT_TRUE(v >= 0.0 && v <= 1.0);
        } catch (const UndefinedRateError&) {
        }
        try {
            const double v1 = control1(d, a, spec).value, v2 = control2(d, a, spec).value;
            EXPECT_TRUE(v1 >= 0.0 && v1 <= 1.0);
            EXPECT_TRUE(v2 >= 0.0 && v2 <= 1.0);
        } catch (const UndefinedRateError&) {
        }
    }
}

namespace {

double brute_auc(const std::vector<ScoredLabel>& d) {
    double s = 0.0;
    std::size_t np = 0, nn = 0;
    for (const auto& p : d) (p.positive ? np : nn)++;
    for (const auto& p : d)
        for (const auto& q : d)
            if (p.positive && !q.positive) s += p.score > q.score ? 1.0 : (p.score == q.score ? 0.5 : 0.0);
    return s / (double(np) * double(nn));
}

std::vector<ScoredLabel> scored(Gen& g) {
    const std::size_t n = 2 + g.index(199);
    std::vector<ScoredLabel> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i].positive = g.coin();
        d[i].score = std::round(g.uniform(0, 1) * 20 + (d[i].positive ? 3 : 0)) / 20;   // many ties
    }
    d[0].positive = true;
    d[1].positive = false;
    return d;
}

} // namespace

TEST(Roc, MatchesPairCounting) {
    Gen g(11);
    for (int c = 0; c < kCases; ++c) {
        const auto d = scored(g);
        EXPECT_NEAR(roc_curve(d).auc, brute_auc(d), 1e-12);
    }
}

TEST(Roc, MonotoneTransformAndLabelInversion) {
    Gen g(12);
    for (int c = 0; c < kCases; ++c) {
        const auto d = scored(g);
        auto t = d, inv = d;
        for (auto& p : t) p.score = std::exp(3.0 * p.score) - 7.0;
        for (auto& p : inv) p.positive = !p.positive;
        const double auc = roc_curve(d).auc;
        EXPECT_DOUBLE_EQ(roc_curve(t).auc, auc);
        EXPECT_NEAR(roc_curve(inv).auc, 1.0 - auc, 1e-12);
    }
}

TEST(Csv, RoundTrip) {
    Gen g(13);
    const std::vector<std::string> names{"a", "b,c", "q\"d", " pad", "x_1", "long name"};
    for (int c = 0; c < kCases; ++c) {
        const std::size_t n = 1 + g.index(6), times = 2 + g.index(3);
        std::vector<std::string> methods{"J", "R"};
        if (g.coin()) methods.push_back("S");
        std::vector<Record> recs;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& m : methods)
                for (std::size_t t = 1; t <= times; ++t)
                    recs.push_back({names[i] + std::to_string(c), t, m, g.normal() * std::pow(10.0, g.uniform(-5, 5))});
        const Dataset d = Dataset::from_records(recs);
        std::ostringstream out;
        if (g.coin()) {
            write_long_csv(out, d);
        } else {
            write_wide_csv(out, d);
        }
        std::istringstream in(out.str());
        EXPECT_EQ(read_dataset(in), d);
    }
}

TEST(Plot, CompanionCsvCountsMatchClassification) {
    Gen g(14);
    for (int c = 0; c < kCases; ++c) {
        const std::size_t periods = 1 + g.index(3);
        const auto d = g.diffs(1 + g.index(25), periods);
        const double a = g.uniform(0, 1);
        std::ostringstream svg, csv;
        const auto counts = render_quadrant_plot(d, a, svg, csv);
        PlotCounts want;
        for (const auto& s : d)
            for (std::size_t t = 0; t < periods; ++t) {
                const auto p = classify_point(s.x[t], s.y[t], a);
                switch (p.kind) {
                case PointKind::AgreeOutside: ++want.agree; break;
                case PointKind::DisagreeOutside: ++want.disagree; break;
                case PointKind::ExclAgree: ++want.excluded_agree; break;
                case PointKind::ExclDisagree: ++want.excluded_disagree; break;
                }
            }
        EXPECT_EQ(counts.agree, want.agree);
        EXPECT_EQ(counts.disagree, want.disagree);
        EXPECT_EQ(counts.excluded_agree, want.excluded_agree);
        EXPECT_EQ(counts.excluded_disagree, want.excluded_disagree);
        const std::string text = csv.str();
        EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 1 + d.size() * periods);
        if (want.disagree == 0) {
            EXPECT_EQ(svg.str().find("class=\"disagree\""), std::string::npos);
        }
    }
}

TEST(Quartiles, Ordered) {
    Gen g(15);
    for (int c = 0; c < kCases; ++c) {
        std::vector<double> v(1 + g.index(50));
        for (auto& x : v) x = g.normal();
        const auto q = quartiles(v);
        EXPECT_LE(q.q1, q.median);
        EXPECT_LE(q.median, q.q3);
        EXPECT_GE(q.q1, *std::min_element(v.begin(), v.end()));
        EXPECT_LE(q.q3, *std::max_element(v.begin(), v.end()));
    }
}

TEST(SimulationCovariance, EveryCombinationIsPositiveDefinite) {
    int combos = 0;
    for (double rho : kRhoLevels)
        for (double rxy : kRhoXyLevels) {
            SimulationCell cell;
            cell.rho = rho;
            cell.rho_xy = rxy;
            const auto ev = symmetric_eigenvalues(cell.cov());
            EXPECT_GT(ev.front(), 0.0) << rho << " " << rxy;
            EXPECT_NO_THROW(cholesky(cell.cov()));
            ++combos;
        }
    EXPECT_EQ(combos, 6);
    // Every cell of the full grid, including all mean patterns.
    for (const auto& c : build_factor_grid()) EXPECT_NO_THROW(c.model());
}
