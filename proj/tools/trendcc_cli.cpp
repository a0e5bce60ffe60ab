// Command-line front end: trendcc <subcommand> [options].

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "trendcc/analysis.hpp"
#include "trendcc/concordance.hpp"
#include "trendcc/dataset.hpp"
#include "trendcc/error.hpp"
#include "trendcc/roc.hpp"
#include "trendcc/sim.hpp"

using namespace trendcc;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::optional<double> tol;
    unsigned threads = 1;
    std::int64_t max_evals = std::int64_t{1} << 22;
};

struct DataOptions {
    std::string path;
    std::string format = "auto";
    std::string pair;
    std::optional<double> a;
    std::optional<double> quantile;
    std::size_t m = 0;

    void add(CLI::App* cmd, bool with_pair = true, bool with_exclusion = true, bool with_m = true) {
        cmd->add_option("--data", path, "Measurement CSV (long or wide)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--format", format, "long, wide or auto")->capture_default_str();
        if (with_pair) cmd->add_option("--pair", pair, "GOLD,EXPERIMENTAL method ids")->required();
        if (with_exclusion) {
            auto* fixed = cmd->add_option("--a", a, "Exclusion half-width");
            cmd->add_option("--quantile", quantile, "Exclusion half-width as this quantile of pooled |differences| "
                                                    "(default 0.1)")
                ->excludes(fixed);
        }
        if (with_m) cmd->add_option("--m", m, "Minimum number of agreeing periods (default T)");
    }

    Dataset load() const { return read_dataset_file(path, parse_csv_format(format)); }
    MethodPair method_pair() const { return MethodPair::parse(pair); }
    ExclusionMode exclusion() const {
        ExclusionMode mode = a ? ExclusionMode::fixed(*a) : ExclusionMode::quantile(quantile.value_or(0.1));
        mode.validate();
        return mode;
    }
};

std::string out_path;

void emit_text(const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) throw DataError("cannot write " + out_path);
}

void emit(const Json& j) { emit_text(j.dump(2) + "\n"); }

std::size_t resolve_m(std::size_t m, std::size_t periods) {
    if (m == 0) return periods;
    AgreementSpec{periods, m}.validate();
    return m;
}

Json exclusion_json(const ExclusionMode& mode, double a) {
    Json j = mode.to_json();
    j["a"] = a;
    return j;
}

int cmd_diff(const DataOptions& d) {
    const auto diffs = d.load().pair_diffs(d.method_pair().gold, d.method_pair().experimental);
    std::ostringstream os;
    os << "subject,t,x,y\n";
    for (const auto& s : diffs)
        for (std::size_t t = 0; t < s.periods(); ++t)
            os << csv_field(s.subject_id) << ',' << t + 1 << ',' << format_number(s.x[t]) << ','
               << format_number(s.y[t]) << '\n';
    emit_text(os.str());
    return 0;
}

int cmd_ccr(const DataOptions& d) {
    const auto pair = d.method_pair();
    const auto diffs = d.load().pair_diffs(pair.gold, pair.experimental);
    const auto mode = d.exclusion();
    const double a = resolve_exclusion(diffs, mode);
    Json j;
    j["schema"] = "trendcc-ccr/1";
    j["pair"] = {{"gold", pair.gold}, {"experimental", pair.experimental}};
    j["exclusion"] = exclusion_json(mode, a);
    j["ccr"] = to_json(ccr(diffs, a));
    emit(j);
    return 0;
}

int cmd_controls(const DataOptions& d) {
    const auto pair = d.method_pair();
    const auto diffs = d.load().pair_diffs(pair.gold, pair.experimental);
    const std::size_t periods = common_periods(diffs);
    const AgreementSpec spec{periods, resolve_m(d.m, periods)};
    const auto mode = d.exclusion();
    const double a = resolve_exclusion(diffs, mode);
    Json j;
    j["schema"] = "trendcc-controls/1";
    j["pair"] = {{"gold", pair.gold}, {"experimental", pair.experimental}};
    j["m"] = spec.min_agreements;
    j["exclusion"] = exclusion_json(mode, a);
    j["control_stats"] = to_json(control_stats(diffs, a));
    j["control1"] = to_json(control1(diffs, a, spec));
    j["control2"] = to_json(control2(diffs, a, spec));
    emit(j);
    return 0;
}

GaussianModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
        const auto mean = j.at("mean").get<std::vector<double>>();
        const auto rows = j.at("cov").get<std::vector<std::vector<double>>>();
        Matrix cov(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cov.cols()) throw DimensionError("covariance rows differ in length");
            for (std::size_t k = 0; k < rows[i].size(); ++k) cov(i, k) = rows[i][k];
        }
        return GaussianModel(mean, cov);
    } catch (const Json::exception& e) {
        throw ParseError(0, path + ": " + e.what());
    }
}

int cmd_proposed(const DataOptions& d, const std::string& model_path, std::uint64_t oracle_draws, const Globals& g) {
    const RateOptions ro{g.tol.value_or(1e-6), g.max_evals, g.seed};
    Json j;
    j["schema"] = "trendcc-proposed/1";
    std::optional<GaussianModel> model;
    double a = 0.0;
    std::size_t n_subjects = 0;
    if (!model_path.empty()) {
        model = read_model(model_path);
        if (d.quantile) throw ConfigError("--quantile needs data; use --a with --model");
        a = d.a.value_or(0.0);
        ExclusionMode::fixed(a).validate();
        j["exclusion"] = exclusion_json(ExclusionMode::fixed(a), a);
    } else {
        if (d.path.empty() || d.pair.empty()) throw ConfigError("proposed needs --model or --data with --pair");
        const auto pair = d.method_pair();
        const auto diffs = d.load().pair_diffs(pair.gold, pair.experimental);
        const auto mode = d.exclusion();
        a = resolve_exclusion(diffs, mode);
        j["pair"] = {{"gold", pair.gold}, {"experimental", pair.experimental}};
        j["exclusion"] = exclusion_json(mode, a);
        model = estimate_model(diffs);
        n_subjects = diffs.size();
    }
    const AgreementSpec spec{model->periods(), resolve_m(d.m, model->periods())};
    const AgreementDistribution dist = agreement_distribution(*model, a, ro);
    ConcordanceResult r = proposed_rate(dist, a, spec.min_agreements);
    r.n_used = n_subjects;
    j["m"] = spec.min_agreements;
    j["integration"] = {{"tol", ro.tol}, {"max_evals", ro.max_evals}, {"seed", ro.seed}};
    j["proposal"] = to_json(r);
    j["denominator"] = {{"value", dist.denominator.value}, {"abs_error", dist.denominator.abs_error}};
    Json joint = Json::array();
    for (const auto& p : dist.joint) joint.push_back({{"value", p.value}, {"abs_error", p.abs_error}});
    j["exact_agreement_probabilities"] = joint;
    j["terms_touched"] = dist.terms_touched;
    j["unique_terms"] = dist.unique_terms;
    j["model"] = to_json(*model);
    if (oracle_draws > 0) j["oracle"] = to_json(oracle_rate(*model, a, spec, oracle_draws, g.seed));
    emit(j);
    return 0;
}

int cmd_analyze(const DataOptions& d, const Globals& g) {
    AnalysisConfig cfg;
    cfg.pair = d.method_pair();
    cfg.exclusion = d.exclusion();
    cfg.m = d.m;
    cfg.tol = g.tol.value_or(1e-6);
    cfg.max_evals = g.max_evals;
    cfg.seed = g.seed;
    const AnalysisReport report = analyze(d.load(), cfg);
    emit(report.json);
    if (report.exit_code != 0) std::cerr << "trendcc: one or more estimators failed; see the report\n";
    return report.exit_code;
}

struct SimArgs {
    std::size_t reps = 100;
    std::vector<int> patterns;
    std::vector<double> rho, rho_xy, a;
    std::vector<std::size_t> m, n;
    double true_tol = 1e-7;
    std::string out_dir = "sim-out";
    bool quiet = false;
};

Json quartiles_json(const Quartiles& q) {
    if (q.count == 0) return Json{{"median", nullptr}, {"q1", nullptr}, {"q3", nullptr}, {"count", 0}};
    return Json{{"median", q.median}, {"q1", q.q1}, {"q3", q.q3}, {"count", q.count}};
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << body) || !f.flush()) throw DataError("cannot write " + path.string());
}

std::string quartile_cells(const Quartiles& q) {
    if (q.count == 0) return ",,";
    return format_number(q.median) + "," + format_number(q.q1) + "," + format_number(q.q3);
}

int cmd_simulate(const SimArgs& s, const Globals& g) {
    StudyConfig cfg;
    cfg.grid = {s.patterns, s.rho, s.rho_xy, s.m, s.a, s.n};
    cfg.reps = s.reps;
    cfg.base_seed = g.seed;
    cfg.threads = g.threads;
    cfg.options.tol = g.tol.value_or(1e-4);
    cfg.options.true_tol = s.true_tol;
    cfg.options.max_evals = g.max_evals;
    if (!s.quiet)
        cfg.progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % std::max<std::size_t>(1, total / 20) == 0)
                std::cerr << "simulate: " << done << "/" << total << " cells\n";
        };
    const StudyResult study = run_study(cfg);

    namespace fs = std::filesystem;
    const fs::path dir(s.out_dir);
    fs::create_directories(dir);

    static constexpr std::array<const char*, 3> bias_names{"control1", "control2", "proposal"};
    static constexpr std::array<const char*, 4> sim_names{"ccr", "control1", "control2", "proposal"};

    std::ostringstream cells;
    cells << "index,pattern,rho,rho_xy,m,a,n,label,true_rate";
    for (const char* name : bias_names) cells << ',' << name << "_median," << name << "_q1," << name << "_q3";
    cells << ",failures\n";
    for (std::size_t i = 0; i < study.cells.size(); ++i) {
        const auto& c = study.cells[i];
        const auto& sum = study.summaries[i];
        cells << c.index << ',' << c.pattern << ',' << format_number(c.rho) << ',' << format_number(c.rho_xy) << ','
              << c.m << ',' << format_number(c.a) << ',' << c.n << ',' << (c.label ? "agree" : "disagree") << ','
              << format_number(sum.true_value);
        for (const auto& q : sum.deviation) cells << ',' << quartile_cells(q);
        std::string failures;
        for (const auto& [tag, count] : sum.failures) failures += (failures.empty() ? "" : ";") + tag + "=" + std::to_string(count);
        cells << ',' << failures << '\n';
    }
    write_file(dir / "cells.csv", cells.str());

    std::ostringstream scores;
    scores << "cell_index,rep,label";
    for (const char* name : sim_names) scores << ',' << name;
    scores << '\n';
    for (const auto& r : study.records) {
        scores << study.cells[r.cell].index << ',' << r.rep << ',' << (study.cells[r.cell].label ? 1 : 0);
        for (double v : r.estimate) scores << ',' << (std::isnan(v) ? std::string() : format_number(v));
        scores << '\n';
    }
    write_file(dir / "scores.csv", scores.str());

    Json summary;
    summary["schema"] = "trendcc-simulation/1";
    summary["reps"] = s.reps;
    summary["base_seed"] = g.seed;
    summary["cells"] = study.cells.size();
    summary["integration"] = {{"tol", cfg.options.tol}, {"true_tol", cfg.options.true_tol}, {"max_evals", g.max_evals}};
    summary["aggregation"] = "pooled replication-level absolute deviations";
    Json tables;
    const std::array<std::pair<Factor, const char*>, 7> factors{{{Factor::Overall, "overall"},
                                                                 {Factor::Pattern, "pattern"},
                                                                 {Factor::Rho, "rho"},
                                                                 {Factor::RhoXy, "rho_xy"},
                                                                 {Factor::M, "m"},
                                                                 {Factor::A, "a"},
                                                                 {Factor::N, "n"}}};
    for (const auto& [factor, name] : factors) {
        Json rows = Json::array();
        std::ostringstream csv;
        csv << "level";
        for (const char* m : bias_names) csv << ',' << m << "_median," << m << "_q1," << m << "_q3";
        csv << '\n';
        for (const auto& row : aggregate(study, factor)) {
            Json rj;
            rj["level"] = row.level;
            csv << row.level;
            for (std::size_t k = 0; k < 3; ++k) {
                rj[bias_names[k]] = quartiles_json(row.deviation[k]);
                csv << ',' << quartile_cells(row.deviation[k]);
            }
            csv << '\n';
            rows.push_back(rj);
        }
        tables[name] = rows;
        write_file(dir / (std::string("by_") + name + ".csv"), csv.str());
    }
    summary["tables"] = tables;

    Json auc;
    try {
        const Diagnosability diag = evaluate_diagnosability(study);
        for (std::size_t k = 0; k < 4; ++k) {
            auc[sim_names[k]] = {{"auc", diag.curves[k].auc}, {"skipped", diag.skipped[k]}};
            std::ostringstream curve;
            curve << "fpr,tpr\n";
            for (const auto& p : diag.curves[k].points)
                curve << format_number(p.fpr) << ',' << format_number(p.tpr) << '\n';
            write_file(dir / (std::string("roc_") + sim_names[k] + ".csv"), curve.str());
        }
    } catch (const DegenerateLabelsError& e) {
        auc = error_json(e);
    }
    summary["auc"] = auc;
    std::map<std::string, std::size_t> failures;
    for (const auto& sum : study.summaries)
        for (const auto& [tag, count] : sum.failures) failures[tag] += count;
    summary["failures"] = failures;
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    emit(summary);
    return 0;
}

int cmd_roc(const std::string& scores_path, const std::string& score_column, const std::string& label_column,
            const std::string& curve_out) {
    std::ifstream in(scores_path);
    if (!in) throw DataError("cannot open " + scores_path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty scores file");
    const auto header = split_csv_line(line);
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ParseError(1, "no column named '" + name + "'");
    };
    const std::size_t label_idx = column(label_column);
    std::vector<std::string> names;
    std::vector<std::size_t> idx;
    if (score_column.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (i != label_idx && header[i] != "cell_index" && header[i] != "rep" && header[i] != "subject") {
                names.push_back(header[i]);
                idx.push_back(i);
            }
    } else {
        names.push_back(score_column);
        idx.push_back(column(score_column));
    }
    std::vector<std::vector<ScoredLabel>> data(names.size());
    std::vector<std::size_t> skipped(names.size(), 0);
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) throw ParseError(n, "wrong number of fields");
        const std::string& lab = f[label_idx];
        bool positive;
        if (lab == "1" || lab == "agree" || lab == "true" || lab == "o")
            positive = true;
        else if (lab == "0" || lab == "disagree" || lab == "false" || lab == "x")
            positive = false;
        else
            throw ParseError(n, "label must be 1/0, agree/disagree, true/false or o/x");
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const std::string& v = f[idx[k]];
            if (v.empty()) {
                ++skipped[k];
                continue;
            }
            double score = 0.0;
            try {
                std::size_t used = 0;
                score = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
            } catch (const std::exception&) {
                throw ParseError(n, "cannot parse score '" + v + "'");
            }
            data[k].push_back({score, positive});
        }
    }
    Json j;
    j["schema"] = "trendcc-roc/1";
    std::ostringstream curve;
    curve << "score,fpr,tpr,threshold\n";
    for (std::size_t k = 0; k < names.size(); ++k) {
        const RocCurve c = roc_curve(data[k]);
        j["auc"][names[k]] = {{"auc", c.auc}, {"positives", c.positives}, {"negatives", c.negatives},
                              {"skipped", skipped[k]}};
        for (const auto& p : c.points)
            curve << names[k] << ',' << format_number(p.fpr) << ',' << format_number(p.tpr) << ','
                  << (std::isinf(p.threshold) ? std::string("inf") : format_number(p.threshold)) << '\n';
    }
    if (!curve_out.empty()) write_file(curve_out, curve.str());
    emit(j);
    return 0;
}

int cmd_plot(const DataOptions& d, const std::string& svg_path, std::string csv_path) {
    const auto pair = d.method_pair();
    const auto diffs = d.load().pair_diffs(pair.gold, pair.experimental);
    const auto mode = d.exclusion();
    const double a = resolve_exclusion(diffs, mode);
    if (csv_path.empty()) csv_path = std::filesystem::path(svg_path).replace_extension(".csv").string();
    const PlotCounts c = render_quadrant_plot(diffs, a, svg_path, csv_path);
    Json j;
    j["schema"] = "trendcc-plot/1";
    j["svg"] = svg_path;
    j["csv"] = csv_path;
    j["exclusion"] = exclusion_json(mode, a);
    j["points"] = {{"agree", c.agree},
                   {"disagree", c.disagree},
                   {"excluded_agree", c.excluded_agree},
                   {"excluded_disagree", c.excluded_disagree}};
    emit(j);
    return 0;
}

int cmd_subsample(const DataOptions& d, const std::vector<std::string>& positive,
                  const std::vector<std::string>& negative, std::size_t k, std::size_t iters, const Globals& g) {
    SubsampleConfig cfg;
    for (const auto& p : positive) cfg.pairs.push_back({MethodPair::parse(p), true});
    for (const auto& p : negative) cfg.pairs.push_back({MethodPair::parse(p), false});
    cfg.k = k;
    cfg.iters = iters;
    cfg.exclusion = d.exclusion();
    cfg.m = d.m;
    cfg.tol = g.tol.value_or(1e-4);
    cfg.max_evals = g.max_evals;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    const SubsampleResult r = subsample_auc(d.load(), cfg);
    emit(to_json(r, cfg));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trending-agreement concordance rates for method-comparison studies"};
    app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Base seed for every random stream")->capture_default_str();
    app.add_option("--tol", g.tol, "Per-term integration tolerance (default 1e-6; 1e-4 for simulate and "
                                   "subsample-auc)")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
    app.add_option("--max-evals", g.max_evals, "Integrand evaluation cap per term")->capture_default_str();

    DataOptions dopt;
    auto add_out = [](CLI::App* cmd) { cmd->add_option("--out,-o", out_path, "Output file (default stdout)"); };

    auto* diff = app.add_subcommand("diff", "Sequential differences of one method pair as CSV");
    dopt.add(diff, true, false, false);
    add_out(diff);

    auto* ccr_cmd = app.add_subcommand("ccr", "Conventional concordance rate");
    dopt.add(ccr_cmd, true, true, false);
    add_out(ccr_cmd);

    auto* controls = app.add_subcommand("controls", "Binomial (control1) and Poisson-binomial (control2) rates");
    dopt.add(controls);
    add_out(controls);

    auto* proposed = app.add_subcommand("proposed", "Model-based conditional concordance rate");
    std::string model_path;
    std::uint64_t oracle_draws = 0;
    proposed->add_option("--data", dopt.path, "Measurement CSV")->check(CLI::ExistingFile);
    proposed->add_option("--format", dopt.format, "long, wide or auto");
    proposed->add_option("--pair", dopt.pair, "GOLD,EXPERIMENTAL");
    proposed->add_option("--model", model_path, "JSON with mean and cov instead of data")->check(CLI::ExistingFile);
    auto* pa = proposed->add_option("--a", dopt.a, "Exclusion half-width");
    proposed->add_option("--quantile", dopt.quantile, "Exclusion quantile of pooled |differences|")->excludes(pa);
    proposed->add_option("--m", dopt.m, "Minimum number of agreeing periods (default T)");
    proposed->add_option("--oracle", oracle_draws, "Also run the sampling oracle with this many draws");
    add_out(proposed);

    auto* analyze_cmd = app.add_subcommand("analyze", "All four estimators for one pair as a JSON report");
    dopt.add(analyze_cmd);
    add_out(analyze_cmd);

    auto* simulate = app.add_subcommand("simulate", "Factorial simulation study");
    SimArgs sim;
    simulate->add_option("--reps", sim.reps, "Replications per cell")->capture_default_str();
    simulate->add_option("--patterns", sim.patterns, "Mean patterns 1..30 (default all)")->delimiter(',');
    simulate->add_option("--rho", sim.rho, "Within-method covariance levels")->delimiter(',');
    simulate->add_option("--rho-xy", sim.rho_xy, "Cross-method covariance levels")->delimiter(',');
    simulate->add_option("--m-levels", sim.m, "Agreement thresholds")->delimiter(',');
    simulate->add_option("--a-levels", sim.a, "Exclusion half-widths")->delimiter(',');
    simulate->add_option("--n-levels", sim.n, "Subject counts")->delimiter(',');
    simulate->add_option("--true-tol", sim.true_tol, "Tolerance for true rates")->capture_default_str();
    simulate->add_option("--out-dir", sim.out_dir, "Directory for tables")->capture_default_str();
    simulate->add_flag("--quiet", sim.quiet, "No progress on stderr");
    add_out(simulate);

    auto* roc = app.add_subcommand("roc", "ROC curve and AUC from a CSV of scores and labels");
    std::string scores_path, score_column, label_column = "label", curve_out;
    roc->add_option("--scores", scores_path, "CSV with a label column and score columns")
        ->required()
        ->check(CLI::ExistingFile);
    roc->add_option("--score-column", score_column, "Score column (default every non-label column)");
    roc->add_option("--label-column", label_column, "Label column")->capture_default_str();
    roc->add_option("--curve-out", curve_out, "Write curve points as CSV");
    add_out(roc);

    auto* plot = app.add_subcommand("plot", "Four-quadrant plot (SVG and companion CSV)");
    dopt.add(plot, true, true, false);
    std::string svg_path = "quadrant.svg", plot_csv;
    plot->add_option("--svg", svg_path, "SVG output")->capture_default_str();
    plot->add_option("--csv", plot_csv, "Companion CSV (default: SVG path with .csv)");
    add_out(plot);

    auto* subsample = app.add_subcommand("subsample-auc", "Subsample-and-classify AUC across method pairs");
    dopt.add(subsample, false, true, true);
    std::vector<std::string> positive, negative;
    std::size_t k = 10, iters = 1000;
    subsample->add_option("--positive", positive, "Pair labelled as agreeing (repeatable)")->required();
    subsample->add_option("--negative", negative, "Pair labelled as disagreeing (repeatable)")->required();
    subsample->add_option("--k", k, "Subjects per subset")->capture_default_str();
    subsample->add_option("--iters", iters, "Iterations")->capture_default_str();
    add_out(subsample);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*diff) return cmd_diff(dopt);
        if (*ccr_cmd) return cmd_ccr(dopt);
        if (*controls) return cmd_controls(dopt);
        if (*proposed) return cmd_proposed(dopt, model_path, oracle_draws, g);
        if (*analyze_cmd) return cmd_analyze(dopt, g);
        if (*simulate) return cmd_simulate(sim, g);
        if (*roc) return cmd_roc(scores_path, score_column, label_column, curve_out);
        if (*plot) return cmd_plot(dopt, svg_path, plot_csv);
        if (*subsample) return cmd_subsample(dopt, positive, negative, k, iters, g);
    } catch (const Error& e) {
        std::cerr << "trendcc: " << e.tag() << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "trendcc: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
