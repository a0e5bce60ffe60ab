#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "trendcc/error.hpp"
#include "trendcc/roc.hpp"
#include "trendcc/sim.hpp"

using namespace trendcc;

TEST(Roc, SmallExample) {
    const std::vector<ScoredLabel> d{{0.9, true}, {0.8, false}, {0.7, true}, {0.6, false}};
    const auto c = roc_curve(d);
    EXPECT_DOUBLE_EQ(c.auc, 0.75);
    EXPECT_EQ(c.positives, 2u);
    EXPECT_EQ(c.negatives, 2u);
    ASSERT_EQ(c.points.size(), 5u);
    EXPECT_EQ(c.points.front().fpr, 0.0);
    EXPECT_EQ(c.points.front().tpr, 0.0);
    EXPECT_EQ(c.points.back().fpr, 1.0);
    EXPECT_EQ(c.points.back().tpr, 1.0);
}

TEST(Roc, TiesGetHalfCredit) {
    const std::vector<ScoredLabel> d{{0.5, true}, {0.5, false}};
    EXPECT_DOUBLE_EQ(roc_curve(d).auc, 0.5);
    const std::vector<ScoredLabel> e{{1, true}, {0.5, true}, {0.5, false}, {0.1, false}};
    EXPECT_DOUBLE_EQ(roc_curve(e).auc, 0.875);
}

TEST(Roc, Errors) {
    const std::vector<ScoredLabel> one{{0.9, true}, {0.1, true}};
    EXPECT_THROW(roc_curve(one), DegenerateLabelsError);
    const std::vector<ScoredLabel> bad{{NAN, true}, {0.1, false}};
    EXPECT_THROW(roc_curve(bad), ParameterError);
}

TEST(Patterns, LabelsMatchPatternTable) {
    const std::set<int> agree{5, 6, 10, 11, 12, 17, 23, 29};
    const auto& p = mean_patterns();
    for (int i = 0; i < 30; ++i) {
        EXPECT_EQ(p[i].number, i + 1);
        EXPECT_EQ(agreement_label(p[i].mu), agree.count(i + 1) > 0) << "pattern " << i + 1;
    }
}

TEST(Patterns, SpotCheckMeans) {
    const auto& p = mean_patterns();
    EXPECT_EQ(p[2].mu, (std::array<double, 4>{-1.5, 1.5, 1.5, 1.5}));
    EXPECT_EQ(p[29].mu, (std::array<double, 4>{0.5, 1.5, -0.5, 1.5}));
}

TEST(Grid, FullAndRestricted) {
    const auto full = build_factor_grid();
    ASSERT_EQ(full.size(), kFullGridSize);
    EXPECT_EQ(full.size(), 1440u);
    for (std::size_t i = 0; i < full.size(); ++i) EXPECT_EQ(full[i].index, i);
    FactorOverrides o;
    o.patterns = {5};
    const auto only5 = build_factor_grid(o);
    ASSERT_EQ(only5.size(), 48u);
    for (const auto& c : only5) {
        EXPECT_EQ(c.pattern, 5);
        EXPECT_EQ(full[c.index].pattern, 5);
        EXPECT_EQ(full[c.index].n, c.n);
        EXPECT_EQ(full[c.index].rho, c.rho);
    }
}

TEST(Grid, RejectsInadmissibleLevels) {
    FactorOverrides o;
    o.patterns = {31};
    EXPECT_THROW(build_factor_grid(o), ConfigError);
    o = {};
    o.rho = {0.5};
    EXPECT_THROW(build_factor_grid(o), ConfigError);
    o = {};
    o.m = {3};
    EXPECT_THROW(build_factor_grid(o), ConfigError);
}

TEST(Grid, CovarianceStructure) {
    SimulationCell c;
    c.rho = 2.0 / 3.0;
    c.rho_xy = 1.0 / 3.0;
    const Matrix s = c.cov();
    EXPECT_EQ(s(0, 0), 1.0);
    EXPECT_EQ(s(0, 1), c.rho);
    EXPECT_EQ(s(2, 3), c.rho);
    EXPECT_EQ(s(0, 2), c.rho_xy);
    EXPECT_EQ(s(1, 3), c.rho_xy);
    EXPECT_EQ(s(0, 3), c.rho_xy);
    EXPECT_EQ(s(1, 2), c.rho_xy);
}

TEST(TrueRate, MirroredPatternsMatch) {
    // Pattern 11 is pattern 5 with every sign flipped.
    FactorOverrides o;
    o.patterns = {5, 11};
    o.rho = {1.0 / 3.0};
    o.rho_xy = {1.0 / 3.0};
    o.n = {15};
    o.a = {0.5};
    o.m = {2};
    const auto cells = build_factor_grid(o);
    ASSERT_EQ(cells.size(), 2u);
    const SimOptions opt{1e-4, 1e-6, std::int64_t{1} << 22};
    EXPECT_NEAR(true_rate(cells[0], opt), true_rate(cells[1], opt), 1e-5);
}

TEST(TrueRate, ConcordantPatternHasHighRate) {
    FactorOverrides o;
    o.patterns = {23};
    o.rho = {0.0};
    o.rho_xy = {1.0 / 3.0};
    o.n = {15};
    o.a = {0.5};
    o.m = {2};
    const auto c = build_factor_grid(o).at(0);
    EXPECT_GT(true_rate(c, {1e-4, 1e-6, std::int64_t{1} << 22}), 0.5);
}

TEST(Quartiles, TypeSeven) {
    const auto q = quartiles({1, 2, 3, 4, 5});
    EXPECT_EQ(q.q1, 2.0);
    EXPECT_EQ(q.median, 3.0);
    EXPECT_EQ(q.q3, 4.0);
    EXPECT_EQ(q.count, 5u);
    const auto e = quartiles({});
    EXPECT_TRUE(std::isnan(e.median));
    EXPECT_EQ(e.count, 0u);
}

TEST(Replication, DeterministicPerSeed) {
    FactorOverrides o;
    o.patterns = {3};
    o.rho = {2.0 / 3.0};
    o.rho_xy = {1.0 / 3.0};
    o.n = {15};
    o.a = {0.5};
    o.m = {1};
    const auto c = build_factor_grid(o).at(0);
    const auto r1 = run_replication(c, 4, 77), r2 = run_replication(c, 4, 77), r3 = run_replication(c, 5, 77);
    for (int k = 0; k < 4; ++k) {
        if (std::isnan(r1.estimate[k])) {
            EXPECT_TRUE(std::isnan(r2.estimate[k]));
        } else {
            EXPECT_EQ(r1.estimate[k], r2.estimate[k]);
            EXPECT_GE(r1.estimate[k], 0.0);
            EXPECT_LE(r1.estimate[k], 1.0);
        }
    }
    EXPECT_NE(r1.estimate[0], r3.estimate[0]);
    EXPECT_THROW(run_cell(c, 0, 0), ParameterError);
}

TEST(Study, ThreadCountDoesNotChangeResults) {
    StudyConfig cfg;
    cfg.grid.patterns = {3, 5};
    cfg.grid.rho = {1.0 / 3.0};
    cfg.grid.rho_xy = {0.0};
    cfg.grid.a = {0.5};
    cfg.reps = 3;
    cfg.base_seed = 12;
    cfg.options.true_tol = 1e-5;
    const auto one = run_study(cfg);
    cfg.threads = 3;
    const auto three = run_study(cfg);
    ASSERT_EQ(one.records.size(), 2u * 2 * 2 * 3);
    ASSERT_EQ(one.records.size(), three.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i)
        for (int k = 0; k < 4; ++k) {
            const double x = one.records[i].estimate[k], y = three.records[i].estimate[k];
            EXPECT_TRUE((std::isnan(x) && std::isnan(y)) || x == y);
        }
    EXPECT_EQ(one.true_rates, three.true_rates);
    const auto rows = aggregate(one, Factor::Pattern);
    ASSERT_EQ(rows.size(), 2u);
    const auto diag = evaluate_diagnosability(one);
    EXPECT_EQ(diag.curves[3].positives + diag.curves[3].negatives + diag.skipped[3], one.records.size());
}
