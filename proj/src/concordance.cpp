#include "trendcc/concordance.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "trendcc/error.hpp"
#include "trendcc/rng.hpp"

namespace trendcc {

std::size_t QuadrantPattern::agreement_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), is_agreement));
}

std::string QuadrantPattern::to_string() const {
    std::string s;
    for (Quadrant q : labels) s += quadrant_symbol(q);
    return s;
}

QuadrantPattern QuadrantPattern::parse(std::string_view symbols) {
    QuadrantPattern p;
    for (char c : symbols) p.labels.push_back(quadrant_from_symbol(c));
    return p;
}

std::vector<QuadrantPattern> QuadrantPattern::all(std::size_t periods) {
    if (periods == 0 || periods > GaussianModel::kMaxDim / 2)
        throw ParameterError("pattern length must lie in [1, 16]");
    std::vector<QuadrantPattern> out;
    const std::size_t count = std::size_t{1} << (2 * periods);
    out.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        QuadrantPattern p;
        p.labels.resize(periods);
        std::size_t c = code;
        for (std::size_t t = periods; t-- > 0; c >>= 2) p.labels[t] = static_cast<Quadrant>(c & 3);
        out.push_back(std::move(p));
    }
    return out;
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
    case Method::Ccr: return "ccr";
    case Method::Control1: return "control1";
    case Method::Control2: return "control2";
    case Method::Proposal: return "proposal";
    case Method::Oracle: return "oracle";
    }
    return "?";
}

namespace {

void check_exclusion(double a) {
    if (!(a >= 0.0)) throw ParameterError("exclusion half-width a must be non-negative");
}

void check_spec(const AgreementSpec& spec, std::size_t periods) {
    spec.validate();
    if (spec.periods != periods)
        throw DimensionError("agreement spec has T=" + std::to_string(spec.periods) + " but the data have T=" +
                             std::to_string(periods));
}

struct Interval {
    double lo, hi;
};

// Quadrant bounds on (X, Y) and the matching exclusion sub-square.
std::array<Interval, 2> quadrant_box(Quadrant q) {
    switch (q) {
    case Quadrant::A: return {{{0.0, kInf}, {0.0, kInf}}};
    case Quadrant::B: return {{{-kInf, 0.0}, {-kInf, 0.0}}};
    case Quadrant::C: return {{{-kInf, 0.0}, {0.0, kInf}}};
    case Quadrant::D: return {{{0.0, kInf}, {-kInf, 0.0}}};
    }
    return {};
}

std::array<Interval, 2> sub_square(Quadrant q, double a) {
    switch (q) {
    case Quadrant::A: return {{{0.0, a}, {0.0, a}}};
    case Quadrant::B: return {{{-a, 0.0}, {-a, 0.0}}};
    case Quadrant::C: return {{{-a, 0.0}, {0.0, a}}};
    case Quadrant::D: return {{{0.0, a}, {-a, 0.0}}};
    }
    return {};
}

std::uint64_t bounds_hash(const SignedRectangle& r) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v + 0.0);
        for (int s = 0; s < 64; s += 8) {
            h ^= (bits >> s) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    for (double v : r.lower) feed(v);
    for (double v : r.upper) feed(v);
    return h;
}

// Memoises rectangle probabilities by their bounds. Each rectangle gets a
// seed derived from its bounds, so results do not depend on visiting order.
class TermCache {
public:
    TermCache(const GaussianModel& model, const RateOptions& options) : model_(model), options_(options) {}

    const ProbEstimate& get(const SignedRectangle& r) {
        std::vector<double> key(r.lower);
        key.insert(key.end(), r.upper.begin(), r.upper.end());
        for (double& v : key) v += 0.0;
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        IntegrationOptions io{options_.tol, options_.max_evals, derive_seed(options_.seed, bounds_hash(r))};
        return cache_.emplace(std::move(key), rect_prob(model_, r.lower, r.upper, io)).first->second;
    }

    std::size_t size() const noexcept { return cache_.size(); }

private:
    const GaussianModel& model_;
    RateOptions options_;
    std::map<std::vector<double>, ProbEstimate> cache_;
};

ProbEstimate combine(TermCache& cache, const std::vector<SignedRectangle>& rects, double constant) {
    ProbEstimate sum{constant, 0.0, 0};
    for (const auto& r : rects) {
        const ProbEstimate& p = cache.get(r);
        sum.value += r.weight * p.value;
        sum.abs_error += p.abs_error;
        sum.evaluations += p.evaluations;
    }
    return sum;
}

ProbEstimate denominator_from(TermCache& cache, std::size_t periods, double a, const RateOptions& options) {
    ProbEstimate d = combine(cache, exclusion_union_rectangles(periods, a), 0.0);
    d.value = 1.0 - d.value;
    if (d.value <= 10.0 * options.tol)
        throw AllMassExcludedError("probability of lying outside every exclusion square is " +
                                   std::to_string(d.value) + " (a=" + std::to_string(a) + ")");
    return d;
}

void check_options(const RateOptions& options) {
    if (!(options.tol > 0.0)) throw ParameterError("integration tolerance must be positive");
    if (options.max_evals < 1) throw ParameterError("evaluation budget must be positive");
}

} // namespace

ConcordanceResult ccr(std::span<const DiffSeries> diffs, double a) {
    check_exclusion(a);
    const std::size_t periods = common_periods(diffs);
    std::size_t agree = 0, excluded = 0;
    for (const auto& d : diffs)
        for (std::size_t t = 0; t < periods; ++t) {
            const PointClass c = classify_point(d.x[t], d.y[t], a);
            if (c.excluded())
                ++excluded;
            else if (c.agreement())
                ++agree;
        }
    const std::size_t total = diffs.size() * periods;
    if (excluded == total) throw UndefinedRateError("every point lies in the exclusion square");
    ConcordanceResult r;
    r.method = Method::Ccr;
    r.a = a;
    r.n_used = total - excluded;
    r.n_excluded = excluded;
    r.value = static_cast<double>(agree) / static_cast<double>(r.n_used);
    return r;
}

ControlStats control_stats(std::span<const DiffSeries> diffs, double a) {
    check_exclusion(a);
    const std::size_t periods = common_periods(diffs);
    ControlStats s;
    s.k.assign(periods, 0);
    s.n_dag.assign(periods, 0);
    s.n_subjects = diffs.size();
    std::vector<PointClass> classes(periods);
    for (const auto& d : diffs) {
        bool keep = true;
        for (std::size_t t = 0; t < periods; ++t) {
            classes[t] = classify_point(d.x[t], d.y[t], a);
            keep = keep && !classes[t].excluded();
        }
        if (!keep) {
            ++s.n_excluded_subjects;
            continue;
        }
        for (std::size_t t = 0; t < periods; ++t) {
            ++s.n_dag[t];
            if (classes[t].agreement()) ++s.k[t];
        }
    }
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t k_sum = 0, n_sum = 0;
    s.p_t.resize(periods);
    for (std::size_t t = 0; t < periods; ++t) {
        k_sum += s.k[t];
        n_sum += s.n_dag[t];
        s.p_t[t] = s.n_dag[t] ? static_cast<double>(s.k[t]) / static_cast<double>(s.n_dag[t]) : nan;
    }
    s.p_pooled = n_sum ? static_cast<double>(k_sum) / static_cast<double>(n_sum) : nan;
    return s;
}

double binomial_tail(std::size_t n, double p, std::size_t m) {
    if (m == 0) return 1.0;
    if (m > n) return 0.0;
    std::vector<double> q(n, p);
    return poisson_binomial_tail(q, m);
}

double poisson_binomial_tail(std::span<const double> p, std::size_t m) {
    if (m == 0) return 1.0;
    if (m > p.size()) return 0.0;
    // dist[j] = P(exactly j successes so far)
    std::vector<double> dist(p.size() + 1, 0.0);
    dist[0] = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j-- > 0;) {
            dist[j + 1] += dist[j] * p[i];
            dist[j] *= 1.0 - p[i];
        }
    double tail = 0.0;
    for (std::size_t j = m; j <= p.size(); ++j) tail += dist[j];
    return std::clamp(tail, 0.0, 1.0);
}

ConcordanceResult control1(std::span<const DiffSeries> diffs, double a, const AgreementSpec& spec) {
    const ControlStats s = control_stats(diffs, a);
    check_spec(spec, s.k.size());
    if (std::isnan(s.p_pooled)) throw UndefinedRateError("control1: every subject has a point in the exclusion square");
    ConcordanceResult r;
    r.method = Method::Control1;
    r.m = spec.min_agreements;
    r.a = a;
    r.n_used = s.n_subjects - s.n_excluded_subjects;
    r.n_excluded = s.n_excluded_subjects;
    r.value = binomial_tail(spec.periods, s.p_pooled, spec.min_agreements);
    return r;
}

ConcordanceResult control2(std::span<const DiffSeries> diffs, double a, const AgreementSpec& spec) {
    const ControlStats s = control_stats(diffs, a);
    check_spec(spec, s.k.size());
    for (double p : s.p_t)
        if (std::isnan(p)) throw UndefinedRateError("control2: no retained subjects at some period");
    ConcordanceResult r;
    r.method = Method::Control2;
    r.m = spec.min_agreements;
    r.a = a;
    r.n_used = s.n_subjects - s.n_excluded_subjects;
    r.n_excluded = s.n_excluded_subjects;
    r.value = poisson_binomial_tail(s.p_t, spec.min_agreements);
    return r;
}

std::vector<SignedRectangle> enumerate_event_rectangles(const QuadrantPattern& pattern, double a) {
    check_exclusion(a);
    const std::size_t periods = pattern.periods();
    if (periods == 0 || periods > GaussianModel::kMaxDim / 2) throw ParameterError("pattern length must lie in [1, 16]");
    const std::size_t count = std::size_t{1} << periods;
    std::vector<SignedRectangle> out;
    out.reserve(count);
    for (std::size_t subset = 0; subset < count; ++subset) {
        SignedRectangle r;
        r.lower.resize(2 * periods);
        r.upper.resize(2 * periods);
        r.weight = std::popcount(subset) % 2 ? -1 : 1;
        for (std::size_t t = 0; t < periods; ++t) {
            const Quadrant q = pattern.labels[t];
            const auto box = (subset >> t) & 1 ? sub_square(q, a) : quadrant_box(q);
            r.lower[t] = box[0].lo;
            r.upper[t] = box[0].hi;
            r.lower[periods + t] = box[1].lo;
            r.upper[periods + t] = box[1].hi;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SignedRectangle> exclusion_union_rectangles(std::size_t periods, double a) {
    check_exclusion(a);
    if (periods == 0 || periods > GaussianModel::kMaxDim / 2) throw ParameterError("T must lie in [1, 16]");
    const std::size_t count = std::size_t{1} << periods;
    std::vector<SignedRectangle> out;
    out.reserve(count - 1);
    for (std::size_t subset = 1; subset < count; ++subset) {
        SignedRectangle r{std::vector<double>(2 * periods, -kInf), std::vector<double>(2 * periods, kInf),
                          std::popcount(subset) % 2 ? 1 : -1};
        for (std::size_t t = 0; t < periods; ++t)
            if ((subset >> t) & 1) {
                r.lower[t] = r.lower[periods + t] = -a;
                r.upper[t] = r.upper[periods + t] = a;
            }
        out.push_back(std::move(r));
    }
    return out;
}

ProbEstimate denominator_prob(const GaussianModel& model, double a, const RateOptions& options) {
    check_exclusion(a);
    check_options(options);
    TermCache cache(model, options);
    return denominator_from(cache, model.periods(), a, options);
}

AgreementDistribution agreement_distribution(const GaussianModel& model, double a, const RateOptions& options) {
    check_exclusion(a);
    check_options(options);
    const std::size_t periods = model.periods();
    TermCache cache(model, options);
    AgreementDistribution dist;
    dist.denominator = denominator_from(cache, periods, a, options);
    dist.joint.assign(periods + 1, ProbEstimate{});
    for (const auto& pattern : QuadrantPattern::all(periods)) {
        const auto rects = enumerate_event_rectangles(pattern, a);
        dist.terms_touched += rects.size();
        const ProbEstimate p = combine(cache, rects, 0.0);
        ProbEstimate& slot = dist.joint[pattern.agreement_count()];
        slot.value += p.value;
        slot.abs_error += p.abs_error;
        slot.evaluations += p.evaluations;
    }
    dist.unique_terms = cache.size();
    return dist;
}

ConcordanceResult proposed_rate(const AgreementDistribution& dist, double a, std::size_t m) {
    const std::size_t periods = dist.joint.size() - 1;
    AgreementSpec{periods, m}.validate();
    double num = 0.0, num_err = 0.0;
    for (std::size_t t = m; t <= periods; ++t) {
        num += dist.joint[t].value;
        num_err += dist.joint[t].abs_error;
    }
    const double den = dist.denominator.value;
    double value = num / den;
    const double err = (num_err + std::abs(value) * dist.denominator.abs_error) / den;
    if (value < -err || value > 1.0 + err)
        throw NumericalInconsistencyError("proposed rate " + std::to_string(value) +
                                          " lies outside [0, 1] by more than its error bound " + std::to_string(err));
    ConcordanceResult r;
    r.method = Method::Proposal;
    r.m = m;
    r.a = a;
    r.value = std::clamp(value, 0.0, 1.0);
    r.numeric_error = err;
    return r;
}

ConcordanceResult proposed_rate(const GaussianModel& model, double a, const AgreementSpec& spec,
                                const RateOptions& options) {
    check_spec(spec, model.periods());
    return proposed_rate(agreement_distribution(model, a, options), a, spec.min_agreements);
}

ConcordanceResult proposed_rate(std::span<const DiffSeries> diffs, double a, const AgreementSpec& spec,
                                const RateOptions& options) {
    check_spec(spec, common_periods(diffs));
    ConcordanceResult r = proposed_rate(estimate_model(diffs), a, spec, options);
    r.n_used = diffs.size();
    return r;
}

ConcordanceResult oracle_rate(const GaussianModel& model, double a, const AgreementSpec& spec, std::uint64_t n_draws,
                              std::uint64_t seed) {
    check_exclusion(a);
    check_spec(spec, model.periods());
    if (n_draws < 10000) throw ParameterError("the sampling oracle needs at least 10^4 draws");
    const std::size_t periods = model.periods();
    GaussianSampler sampler(model, seed);
    std::array<double, GaussianModel::kMaxDim> buf{};
    const std::span<double> z(buf.data(), model.dim());
    std::uint64_t retained = 0, hits = 0;
    for (std::uint64_t i = 0; i < n_draws; ++i) {
        sampler.draw(i, z);
        std::size_t agree = 0;
        bool keep = true;
        for (std::size_t t = 0; t < periods && keep; ++t) {
            const PointClass c = classify_point(z[t], z[periods + t], a);
            keep = !c.excluded();
            agree += c.agreement();
        }
        if (!keep) continue;
        ++retained;
        if (agree >= spec.min_agreements) ++hits;
    }
    if (retained < 100)
        throw AllMassExcludedError("only " + std::to_string(retained) + " of " + std::to_string(n_draws) +
                                   " draws fall outside every exclusion square");
    ConcordanceResult r;
    r.method = Method::Oracle;
    r.m = spec.min_agreements;
    r.a = a;
    r.n_used = retained;
    r.n_excluded = n_draws - retained;
    r.value = static_cast<double>(hits) / static_cast<double>(retained);
    r.numeric_error = 3.0 * std::sqrt(r.value * (1.0 - r.value) / static_cast<double>(retained));
    return r;
}

} // namespace trendcc
