#include "trendcc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "trendcc/error.hpp"
#include "trendcc/rng.hpp"

namespace trendcc {

MethodPair MethodPair::parse(std::string_view text) {
    const auto cut = text.find_first_of(",:");
    if (cut == std::string_view::npos || cut == 0 || cut + 1 >= text.size())
        throw ConfigError("method pair must look like GOLD,EXPERIMENTAL, got '" + std::string(text) + "'");
    MethodPair p{std::string(text.substr(0, cut)), std::string(text.substr(cut + 1))};
    if (p.experimental.find_first_of(",:") != std::string::npos)
        throw ConfigError("method pair has more than two methods: '" + std::string(text) + "'");
    return p;
}

void ExclusionMode::validate() const {
    if (kind == Fixed && !(value >= 0.0 && std::isfinite(value)))
        throw ConfigError("fixed exclusion half-width must be a finite non-negative number");
    if (kind == Quantile && !(value > 0.0 && value < 1.0))
        throw ConfigError("exclusion quantile must lie strictly between 0 and 1");
}

Json ExclusionMode::to_json() const {
    Json j;
    if (kind == Fixed) {
        j["mode"] = "fixed";
    } else {
        j["mode"] = "quantile";
        j["q"] = value;
        j["basis"] = "pooled absolute differences of both methods";
    }
    return j;
}

double resolve_exclusion(std::span<const DiffSeries> diffs, const ExclusionMode& mode) {
    mode.validate();
    if (mode.kind == ExclusionMode::Fixed) return mode.value;
    std::vector<double> pool;
    for (const auto& d : diffs) {
        for (double v : d.x) pool.push_back(std::abs(v));
        for (double v : d.y) pool.push_back(std::abs(v));
    }
    if (pool.empty()) throw DataError("no differences to take a quantile of");
    return quantile_type7(std::move(pool), mode.value);
}

double resolve_exclusion(const Dataset& data, const MethodPair& pair, const ExclusionMode& mode) {
    return resolve_exclusion(data.pair_diffs(pair.gold, pair.experimental), mode);
}

Json to_json(const ConcordanceResult& r) {
    Json j;
    j["status"] = "ok";
    j["value"] = r.value;
    j["method"] = std::string(to_string(r.method));
    if (r.method != Method::Ccr) j["m"] = r.m;
    j["a"] = r.a;
    j["n_used"] = r.n_used;
    j["n_excluded"] = r.n_excluded;
    j["numeric_error"] = r.numeric_error;
    return j;
}

Json to_json(const ControlStats& s) {
    Json j;
    j["k"] = s.k;
    j["n_dagger"] = s.n_dag;
    j["p_pooled"] = std::isnan(s.p_pooled) ? Json(nullptr) : Json(s.p_pooled);
    Json pt = Json::array();
    for (double p : s.p_t) pt.push_back(std::isnan(p) ? Json(nullptr) : Json(p));
    j["p_t"] = pt;
    j["subjects"] = s.n_subjects;
    j["subjects_excluded"] = s.n_excluded_subjects;
    return j;
}

Json to_json(const GaussianModel& model) {
    Json j;
    j["mean"] = model.mean();
    Json cov = Json::array();
    for (std::size_t i = 0; i < model.dim(); ++i) {
        const auto row = model.cov().row(i);
        cov.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["cov"] = cov;
    return j;
}

Json error_json(const Error& e) {
    Json j;
    j["status"] = "error";
    j["error"] = e.tag();
    j["message"] = e.what();
    j["exit_code"] = exit_code(e.kind());
    return j;
}

namespace {

std::size_t resolve_m(std::size_t m, std::size_t periods) {
    if (m == 0) return periods;
    AgreementSpec{periods, m}.validate();
    return m;
}

PlotCounts count_points(std::span<const DiffSeries> diffs, double a) {
    PlotCounts c;
    for (const auto& d : diffs)
        for (std::size_t t = 0; t < d.periods(); ++t) switch (classify_point(d.x[t], d.y[t], a).kind) {
            case PointKind::AgreeOutside: ++c.agree; break;
            case PointKind::DisagreeOutside: ++c.disagree; break;
            case PointKind::ExclAgree: ++c.excluded_agree; break;
            case PointKind::ExclDisagree: ++c.excluded_disagree; break;
            }
    return c;
}

} // namespace

AnalysisReport analyze(const Dataset& data, const AnalysisConfig& config) {
    config.exclusion.validate();
    const auto diffs = data.pair_diffs(config.pair.gold, config.pair.experimental);
    const std::size_t periods = common_periods(diffs);
    const std::size_t m = resolve_m(config.m, periods);
    const double a = resolve_exclusion(diffs, config.exclusion);
    const AgreementSpec spec{periods, m};

    AnalysisReport report;
    Json& j = report.json;
    j["schema"] = "trendcc-analysis/1";
    j["pair"] = {{"gold", config.pair.gold}, {"experimental", config.pair.experimental}};
    j["subjects"] = diffs.size();
    j["periods"] = periods;
    j["m"] = m;
    Json ex = config.exclusion.to_json();
    ex["a"] = a;
    j["exclusion"] = ex;
    j["integration"] = {{"tol", config.tol}, {"max_evals", config.max_evals}, {"seed", config.seed}};
    Json warnings = Json::array();
    if (diffs.size() < recommended_min_subjects(periods))
        warnings.push_back("fewer than 2T+1 subjects; the covariance estimate is fragile");
    j["warnings"] = warnings;

    const PlotCounts pc = count_points(diffs, a);
    j["points"] = {{"agree", pc.agree},
                   {"disagree", pc.disagree},
                   {"excluded_agree", pc.excluded_agree},
                   {"excluded_disagree", pc.excluded_disagree}};
    j["control_stats"] = to_json(control_stats(diffs, a));

    Json est;
    auto record = [&](const char* name, auto&& fn) {
        try {
            est[name] = fn();
        } catch (const Error& e) {
            est[name] = error_json(e);
            report.exit_code = std::max(report.exit_code, exit_code(e.kind()));
        }
    };
    record("ccr", [&] { return to_json(ccr(diffs, a)); });
    record("control1", [&] { return to_json(control1(diffs, a, spec)); });
    record("control2", [&] { return to_json(control2(diffs, a, spec)); });
    record("proposal", [&] {
        const GaussianModel model = estimate_model(diffs);
        const AgreementDistribution dist =
            agreement_distribution(model, a, RateOptions{config.tol, config.max_evals, config.seed});
        ConcordanceResult r = proposed_rate(dist, a, m);
        r.n_used = diffs.size();
        Json pj = to_json(r);
        pj["denominator"] = dist.denominator.value;
        Json joint = Json::array();
        for (const auto& p : dist.joint) joint.push_back(p.value);
        pj["exact_agreement_probabilities"] = joint;
        pj["terms_touched"] = dist.terms_touched;
        pj["unique_terms"] = dist.unique_terms;
        pj["model"] = to_json(model);
        return pj;
    });
    j["estimates"] = est;
    j["status"] = report.exit_code == 0 ? "ok" : "error";
    return report;
}

SubsampleResult subsample_auc(const Dataset& data, const SubsampleConfig& config) {
    config.exclusion.validate();
    if (config.pairs.empty()) throw ConfigError("subsample-auc needs at least one method pair");
    if (config.iters < 1) throw ConfigError("iters must be at least 1");
    const std::size_t n = data.subjects().size();
    if (config.k < 2 || config.k > n)
        throw ConfigError("subset size k must lie in [2, " + std::to_string(n) + "]");

    SubsampleResult out;
    std::vector<std::vector<DiffSeries>> full;
    for (const auto& lp : config.pairs) {
        full.push_back(data.pair_diffs(lp.pair.gold, lp.pair.experimental));
        out.a.push_back(resolve_exclusion(full.back(), config.exclusion));
    }
    const std::size_t periods = common_periods(full.front());
    out.m = resolve_m(config.m, periods);
    const AgreementSpec spec{periods, out.m};
    const std::size_t np = config.pairs.size();

    // scores[i][method][pair], NaN when that estimator failed.
    std::vector<std::array<std::vector<double>, 4>> scores(config.iters);
    auto run = [&](std::size_t it) {
        CounterRng rng(config.seed, it);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t j = 0; j < config.k; ++j) std::swap(idx[j], idx[j + rng.below(n - j)]);
        auto& s = scores[it];
        for (auto& v : s) v.assign(np, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t p = 0; p < np; ++p) {
            std::vector<DiffSeries> sub;
            for (std::size_t j = 0; j < config.k; ++j) sub.push_back(full[p][idx[j]]);
            const double a = out.a[p];
            const RateOptions ro{config.tol, config.max_evals, derive_seed(derive_seed(config.seed, it), p)};
            auto attempt = [&](std::size_t method, auto&& fn) {
                try {
                    s[method][p] = fn();
                } catch (const Error&) {
                }
            };
            attempt(0, [&] { return ccr(sub, a).value; });
            attempt(1, [&] { return control1(sub, a, spec).value; });
            attempt(2, [&] { return control2(sub, a, spec).value; });
            attempt(3, [&] { return proposed_rate(std::span<const DiffSeries>(sub), a, spec, ro).value; });
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.iters)));
    if (threads == 1) {
        for (std::size_t it = 0; it < config.iters; ++it) run(it);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t it; (it = next.fetch_add(1)) < config.iters;) run(it);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t method = 0; method < 4; ++method) {
        std::vector<ScoredLabel> sl;
        for (const auto& s : scores) {
            const auto& v = s[method];
            if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); })) {
                ++out.failed_iterations[method];
                continue;
            }
            for (std::size_t p = 0; p < np; ++p) sl.push_back({v[p], config.pairs[p].positive});
        }
        out.curves[method] = roc_curve(sl);
    }
    return out;
}

Json to_json(const SubsampleResult& r, const SubsampleConfig& config) {
    static constexpr std::array<const char*, 4> names{"ccr", "control1", "control2", "proposal"};
    Json j;
    j["schema"] = "trendcc-subsample-auc/1";
    Json pairs = Json::array();
    for (std::size_t p = 0; p < config.pairs.size(); ++p)
        pairs.push_back({{"gold", config.pairs[p].pair.gold},
                         {"experimental", config.pairs[p].pair.experimental},
                         {"label", config.pairs[p].positive ? "agreement" : "disagreement"},
                         {"a", r.a[p]}});
    j["pairs"] = pairs;
    j["k"] = config.k;
    j["iters"] = config.iters;
    j["m"] = r.m;
    j["exclusion"] = config.exclusion.to_json();
    j["integration"] = {{"tol", config.tol}, {"max_evals", config.max_evals}, {"seed", config.seed}};
    Json auc;
    for (std::size_t k = 0; k < 4; ++k)
        auc[names[k]] = {{"auc", r.curves[k].auc},
                         {"positives", r.curves[k].positives},
                         {"negatives", r.curves[k].negatives},
                         {"failed_iterations", r.failed_iterations[k]}};
    j["auc"] = auc;
    return j;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

PlotCounts render_quadrant_plot(std::span<const DiffSeries> diffs, double a, std::ostream& svg, std::ostream& csv) {
    if (diffs.empty()) throw DataError("nothing to plot");
    if (!(a >= 0.0)) throw ParameterError("exclusion half-width a must be non-negative");
    double extent = a;
    for (const auto& d : diffs) {
        d.validate();
        for (std::size_t t = 0; t < d.periods(); ++t) extent = std::max({extent, std::abs(d.x[t]), std::abs(d.y[t])});
    }
    extent = extent > 0.0 ? extent * 1.1 : 1.0;

    constexpr double size = 480.0, margin = 40.0, half = (size - 2 * margin) / 2;
    const double cx = margin + half, cy = margin + half;
    auto px = [&](double x) { return fmt2(cx + x / extent * half); };
    auto py = [&](double y) { return fmt2(cy - y / extent * half); };

    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n"
        << "<rect width=\"480\" height=\"480\" fill=\"white\"/>\n"
        << "<line x1=\"" << margin << "\" y1=\"" << cy << "\" x2=\"" << size - margin << "\" y2=\"" << cy
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << cx << "\" y1=\"" << margin << "\" x2=\"" << cx << "\" y2=\"" << size - margin
        << "\" stroke=\"black\"/>\n"
        << "<line class=\"identity\" x1=\"" << px(-extent) << "\" y1=\"" << py(-extent) << "\" x2=\"" << px(extent)
        << "\" y2=\"" << py(extent) << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n"
        << "<rect class=\"exclusion\" x=\"" << px(-a) << "\" y=\"" << py(a) << "\" width=\""
        << fmt2(2 * a / extent * half) << "\" height=\"" << fmt2(2 * a / extent * half)
        << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6,3\"/>\n";

    csv << "subject,t,x,y,quadrant,class\n";
    PlotCounts counts;
    for (const auto& d : diffs)
        for (std::size_t t = 0; t < d.periods(); ++t) {
            const PointClass c = classify_point(d.x[t], d.y[t], a);
            const char* style = "";
            switch (c.kind) {
            case PointKind::AgreeOutside:
                ++counts.agree;
                style = "class=\"agree\" fill=\"#d62728\"";
                break;
            case PointKind::DisagreeOutside:
                ++counts.disagree;
                style = "class=\"disagree\" fill=\"#1f77b4\"";
                break;
            case PointKind::ExclAgree:
                ++counts.excluded_agree;
                style = "class=\"excluded\" fill=\"none\" stroke=\"#7f7f7f\"";
                break;
            case PointKind::ExclDisagree:
                ++counts.excluded_disagree;
                style = "class=\"excluded\" fill=\"none\" stroke=\"#7f7f7f\"";
                break;
            }
            svg << "<circle cx=\"" << px(d.x[t]) << "\" cy=\"" << py(d.y[t]) << "\" r=\"3\" " << style << "/>\n";
            csv << csv_field(d.subject_id) << ',' << t + 1 << ',' << format_number(d.x[t]) << ','
                << format_number(d.y[t]) << ',' << quadrant_symbol(c.quadrant) << ',' << to_string(c.kind) << '\n';
        }
    svg << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"12\">a = "
        << format_number(a) << "; agree " << counts.agree << ", disagree " << counts.disagree << ", excluded "
        << counts.excluded_agree + counts.excluded_disagree << "</text>\n"
        << "</svg>\n";
    return counts;
}

PlotCounts render_quadrant_plot(std::span<const DiffSeries> diffs, double a, const std::string& svg_path,
                                const std::string& csv_path) {
    std::ostringstream svg, csv;
    const PlotCounts counts = render_quadrant_plot(diffs, a, svg, csv);
    for (const auto& [path, body] : {std::pair{svg_path, svg.str()}, std::pair{csv_path, csv.str()}}) {
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << body) || !out.flush()) throw DataError("cannot write " + path);
    }
    return counts;
}

} // namespace trendcc
