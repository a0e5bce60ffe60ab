#include <gtest/gtest.h>

#include <sstream>

#include "trendcc/analysis.hpp"
#include "trendcc/dataset.hpp"
#include "trendcc/error.hpp"

using namespace trendcc;

namespace {

Dataset parse(const std::string& text, CsvFormat fmt = CsvFormat::Auto) {
    std::istringstream in(text);
    return read_dataset(in, fmt);
}

// 12 subjects, three methods, three time points. R tracks J closely; S is noisy.
std::string small_study() {
    const double j[12][3] = {{120, 126, 131}, {140, 132, 135}, {110, 118, 112}, {150, 149, 160}, {135, 128, 122},
                             {128, 137, 133}, {142, 150, 147}, {118, 111, 119}, {131, 124, 138}, {145, 152, 141},
                             {122, 129, 136}, {139, 133, 127}};
    const double s[12][3] = {{121, 119, 133}, {139, 137, 130}, {112, 111, 119}, {148, 156, 151}, {133, 135, 120},
                             {130, 126, 140}, {140, 146, 153}, {120, 121, 110}, {129, 133, 126}, {147, 140, 150},
                             {125, 121, 131}, {137, 141, 125}};
    std::ostringstream out;
    out << "subject,time,method,value\n";
    for (int i = 0; i < 12; ++i)
        for (int t = 0; t < 3; ++t) {
            out << "p" << i << ',' << t + 1 << ",J," << j[i][t] << '\n';
            out << "p" << i << ',' << t + 1 << ",R," << j[i][t] + ((i + t) % 3) - 1 << '\n';
            out << "p" << i << ',' << t + 1 << ",S," << s[i][t] << '\n';
        }
    return out.str();
}

} // namespace

TEST(Csv, SplitHandlesQuotes) {
    EXPECT_EQ(split_csv_line("a,\"b,c\",\"d\"\"e\",\r"), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
    EXPECT_EQ(csv_field("x,y"), "\"x,y\"");
    EXPECT_EQ(csv_field("plain"), "plain");
}

TEST(Csv, LongFormat) {
    const auto d = parse("subject,time,method,value\ns1,1,J,10\ns1,2,J,12\ns1,1,R,9\ns1,2,R,13\n");
    EXPECT_EQ(d.subjects(), (std::vector<std::string>{"s1"}));
    EXPECT_EQ(d.methods(), (std::vector<std::string>{"J", "R"}));
    EXPECT_EQ(d.time_points(), 2u);
    EXPECT_EQ(d.value("s1", "R", 2), 13.0);
}

TEST(Csv, WideFormatMatchesLong) {
    const auto wide = parse("subject,J_1,J_2,R_1,R_2\ns1,10,12,9,13\n");
    const auto lng = parse("subject,time,method,value\ns1,1,J,10\ns1,2,J,12\ns1,1,R,9\ns1,2,R,13\n");
    EXPECT_EQ(wide, lng);
}

TEST(Csv, IncompleteSeriesNamesSubjects) {
    try {
        parse("subject,time,method,value\ns1,1,J,1\ns1,2,J,2\ns1,1,R,1\ns1,2,R,2\ns2,1,J,1\ns2,1,R,1\ns2,2,R,1\n");
        FAIL();
    } catch (const IncompleteSeriesError& e) {
        EXPECT_EQ(e.subjects(), (std::vector<std::string>{"s2"}));
        EXPECT_EQ(exit_code(e.kind()), 3);
    }
}

TEST(Csv, DuplicateRecordReportsLine) {
    try {
        parse("subject,time,method,value\ns1,1,J,1\ns1,2,J,2\ns1,1,J,5\n");
        FAIL();
    } catch (const DuplicateRecordError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Csv, MalformedValueReportsLine) {
    try {
        parse("subject,time,method,value\ns1,1,J,1\ns1,2,J,abc\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("subject,time,method,value\ns1,1,J,1\n"), DataError);
}

TEST(Csv, RoundTripBothLayouts) {
    const auto d = parse(small_study());
    std::ostringstream a, b;
    write_long_csv(a, d);
    write_wide_csv(b, d);
    EXPECT_EQ(parse(a.str()), d);
    EXPECT_EQ(parse(b.str()), d);
}

TEST(Exclusion, QuantileOfPooledAbsoluteDifferences) {
    // |x| = 1..5 and |y| = 6..10 pooled.
    std::vector<DiffSeries> d{{"a", {1, -2, 3, 4, -5}, {6, 7, -8, 9, 10}}};
    EXPECT_NEAR(resolve_exclusion(d, ExclusionMode::quantile(0.1)), 1.9, 1e-15);
    EXPECT_EQ(resolve_exclusion(d, ExclusionMode::fixed(0.7)), 0.7);
    EXPECT_THROW(resolve_exclusion(d, ExclusionMode::quantile(0.0)), ConfigError);
    EXPECT_THROW(resolve_exclusion(d, ExclusionMode::quantile(1.0)), ConfigError);
    EXPECT_THROW(resolve_exclusion(d, ExclusionMode::fixed(-1.0)), ConfigError);
}

TEST(MethodPairs, Parse) {
    EXPECT_EQ(MethodPair::parse("J,R").experimental, "R");
    EXPECT_EQ(MethodPair::parse("J:S").gold, "J");
    EXPECT_THROW(MethodPair::parse("JR"), ConfigError);
}

TEST(Analyze, ReportContainsEveryEstimator) {
    const auto d = parse(small_study());
    AnalysisConfig cfg;
    cfg.pair = MethodPair::parse("J,R");
    cfg.exclusion = ExclusionMode::fixed(0.5);
    cfg.tol = 1e-5;
    const auto rep = analyze(d, cfg);
    EXPECT_EQ(rep.exit_code, 0);
    EXPECT_EQ(rep.json["m"], 2);
    for (const char* k : {"ccr", "control1", "control2", "proposal"}) {
        const auto& e = rep.json["estimates"][k];
        EXPECT_EQ(e["status"], "ok") << k;
        EXPECT_GE(e["value"].get<double>(), 0.0);
        EXPECT_LE(e["value"].get<double>(), 1.0);
    }
}

TEST(Analyze, ConfigurationErrors) {
    const auto d = parse(small_study());
    AnalysisConfig cfg;
    cfg.pair = MethodPair::parse("J,R");
    cfg.m = 3;
    EXPECT_THROW(analyze(d, cfg), ParameterError);
    cfg.m = 1;
    cfg.pair = MethodPair::parse("J,Q");
    EXPECT_THROW(analyze(d, cfg), DataError);
}

TEST(Analyze, CloseMethodsBeatNoisyMethod) {
    const auto d = parse(small_study());
    AnalysisConfig cfg;
    cfg.exclusion = ExclusionMode::fixed(0.5);
    cfg.tol = 1e-5;
    cfg.pair = MethodPair::parse("J,R");
    const double jr = analyze(d, cfg).json["estimates"]["proposal"]["value"];
    cfg.pair = MethodPair::parse("J,S");
    const double js = analyze(d, cfg).json["estimates"]["proposal"]["value"];
    EXPECT_GT(jr, js);
}

TEST(Analyze, FullExclusionIsReportedNotThrown) {
    const auto d = parse(small_study());
    AnalysisConfig cfg;
    cfg.pair = MethodPair::parse("J,R");
    cfg.exclusion = ExclusionMode::fixed(1000.0);
    const auto rep = analyze(d, cfg);
    EXPECT_EQ(rep.exit_code, 4);
    EXPECT_EQ(rep.json["estimates"]["ccr"]["status"], "error");
    EXPECT_EQ(rep.json["estimates"]["ccr"]["error"], "undefined-rate");
}

TEST(Plot, AgreementOnlyDataHasNoDisagreement) {
    std::vector<DiffSeries> d{{"a", {1, 2}, {1.5, 2.5}}, {"b", {-1, 3}, {-2, 1}}};
    std::ostringstream svg, csv;
    const auto c = render_quadrant_plot(d, 0.0, svg, csv);
    EXPECT_EQ(c.agree, 4u);
    EXPECT_EQ(c.disagree, 0u);
    EXPECT_NE(svg.str().find("<svg"), std::string::npos);
    EXPECT_EQ(svg.str().find("class=\"disagree\""), std::string::npos);
}

TEST(Plot, CompanionCsvMatchesClassification) {
    std::vector<DiffSeries> d{{"a", {6, 5}, {7, -1}}};   // agreement at t=1, disagreement at t=2
    std::ostringstream svg, csv;
    const auto c = render_quadrant_plot(d, 0.5, svg, csv);
    EXPECT_EQ(c.agree, 1u);
    EXPECT_EQ(c.disagree, 1u);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "subject,t,x,y,quadrant,class");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 4), "a,1,");
    EXPECT_NE(line.find(",A,"), std::string::npos);
    std::getline(in, line);
    EXPECT_NE(line.find(",D,"), std::string::npos);
}

TEST(Plot, EmptyInputFails) {
    std::ostringstream svg, csv;
    EXPECT_THROW(render_quadrant_plot(std::vector<DiffSeries>{}, 0.5, svg, csv), DataError);
}

TEST(Subsample, DeterministicAndThreadIndependent) {
    const auto d = parse(small_study());
    SubsampleConfig cfg;
    cfg.pairs = {{MethodPair::parse("J,R"), true}, {MethodPair::parse("J,S"), false}};
    cfg.k = 8;
    cfg.iters = 12;
    cfg.exclusion = ExclusionMode::fixed(0.5);
    cfg.seed = 5;
    const auto a = subsample_auc(d, cfg);
    cfg.threads = 2;
    const auto b = subsample_auc(d, cfg);
    EXPECT_EQ(to_json(a, cfg).dump(), to_json(b, cfg).dump());
    for (int k = 0; k < 4; ++k) EXPECT_EQ(a.curves[k].auc, b.curves[k].auc);
    cfg.k = 20;
    EXPECT_THROW(subsample_auc(d, cfg), Error);
}
