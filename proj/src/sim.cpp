#include "trendcc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "trendcc/error.hpp"
#include "trendcc/mvn.hpp"
#include "trendcc/rng.hpp"

namespace trendcc {

const std::array<MeanPattern, 30>& mean_patterns() {
    static const std::array<MeanPattern, 30> table{{
        {1, {-1.5, -1.5, 1.5, 1.5}},
        {2, {-0.5, -0.5, 0.5, 0.5}},
        {3, {-1.5, 1.5, 1.5, 1.5}},
        {4, {0.5, -0.5, 0.5, 0.5}},
        {5, {1.5, 1.5, 1.5, 1.5}},
        {6, {0.5, 0.5, 0.5, 0.5}},
        {7, {-0.5, -1.5, 0.5, 1.5}},
        {8, {0.5, -1.5, 0.5, 1.5}},
        {9, {-0.5, 1.5, 0.5, 1.5}},
        {10, {0.5, 1.5, 0.5, 1.5}},
        {11, {-1.5, -1.5, -1.5, -1.5}},
        {12, {-0.5, -0.5, -0.5, -0.5}},
        {13, {-1.5, 1.5, -1.5, -1.5}},
        {14, {0.5, -0.5, -0.5, -0.5}},
        {15, {1.5, 1.5, -1.5, -1.5}},
        {16, {0.5, 0.5, -0.5, -0.5}},
        {17, {-0.5, -1.5, -0.5, -1.5}},
        {18, {0.5, -1.5, -0.5, -1.5}},
        {19, {-0.5, 1.5, -0.5, -1.5}},
        {20, {0.5, 1.5, -0.5, -1.5}},
        {21, {-1.5, -1.5, -1.5, 1.5}},
        {22, {-0.5, -0.5, -0.5, 0.5}},
        {23, {-1.5, 1.5, -1.5, 1.5}},
        {24, {0.5, -0.5, -0.5, 0.5}},
        {25, {1.5, 1.5, -1.5, 1.5}},
        {26, {0.5, 0.5, -0.5, 0.5}},
        {27, {-0.5, -1.5, -0.5, 1.5}},
        {28, {0.5, -1.5, -0.5, 1.5}},
        {29, {-0.5, 1.5, -0.5, 1.5}},
        {30, {0.5, 1.5, -0.5, 1.5}},
    }};
    return table;
}

bool agreement_label(const std::array<double, 4>& mu) noexcept {
    auto same = [](double x, double y) { return (x >= 0.0) == (y >= 0.0); };
    return same(mu[0], mu[2]) && same(mu[1], mu[3]);
}

std::array<double, 4> SimulationCell::mean() const { return mean_patterns().at(static_cast<std::size_t>(pattern - 1)).mu; }

Matrix SimulationCell::cov() const {
    const double r = rho, c = rho_xy;
    return Matrix{{1.0, r, c, c}, {r, 1.0, c, c}, {c, c, 1.0, r}, {c, c, r, 1.0}};
}

GaussianModel SimulationCell::model() const {
    const auto mu = mean();
    return GaussianModel(std::vector<double>(mu.begin(), mu.end()), cov());
}

namespace {

template <class T, std::size_t N>
std::vector<std::size_t> level_indices(const std::vector<T>& requested, const std::array<T, N>& levels,
                                       const char* name) {
    std::vector<std::size_t> out;
    if (requested.empty()) {
        for (std::size_t i = 0; i < N; ++i) out.push_back(i);
        return out;
    }
    for (const T& v : requested) {
        std::size_t hit = N;
        for (std::size_t i = 0; i < N; ++i)
            if (std::abs(static_cast<double>(v) - static_cast<double>(levels[i])) < 1e-9) hit = i;
        if (hit == N) {
            std::ostringstream os;
            os << name << " level " << v << " is not admissible";
            throw ConfigError(os.str());
        }
        if (std::find(out.begin(), out.end(), hit) == out.end()) out.push_back(hit);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// True rates depend on (pattern, rho, rho_xy, a) only; m selects a tail of
// the shared agreement distribution.
using ModelKey = std::tuple<int, double, double, double>;

ModelKey model_key(const SimulationCell& c) { return {c.pattern, c.rho, c.rho_xy, c.a}; }

// Canonical index with the m and n digits cleared: cells sharing a model
// share the integration seed.
std::size_t model_index(const SimulationCell& c) { return c.index - c.index % 8 + c.index / 2 % 2 * 2; }

AgreementDistribution true_distribution(const SimulationCell& cell, const SimOptions& options) {
    RateOptions ro{options.true_tol, options.max_evals, derive_seed(0x7472756500000000ull, model_index(cell))};
    return agreement_distribution(cell.model(), cell.a, ro);
}

constexpr std::uint64_t kIntegrationStream = ~std::uint64_t{0};

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

std::vector<SimulationCell> build_factor_grid(const FactorOverrides& overrides) {
    std::vector<std::size_t> patterns;
    if (overrides.patterns.empty()) {
        for (std::size_t i = 0; i < 30; ++i) patterns.push_back(i);
    } else {
        for (int p : overrides.patterns) {
            if (p < 1 || p > 30) throw ConfigError("pattern " + std::to_string(p) + " is not in 1..30");
            const auto idx = static_cast<std::size_t>(p - 1);
            if (std::find(patterns.begin(), patterns.end(), idx) == patterns.end()) patterns.push_back(idx);
        }
        std::sort(patterns.begin(), patterns.end());
    }
    const auto rho = level_indices(overrides.rho, kRhoLevels, "rho");
    const auto rxy = level_indices(overrides.rho_xy, kRhoXyLevels, "rho_xy");
    const auto ms = level_indices(overrides.m, kMLevels, "m");
    const auto as = level_indices(overrides.a, kALevels, "a");
    const auto ns = level_indices(overrides.n, kNLevels, "n");

    std::vector<SimulationCell> cells;
    for (std::size_t ip : patterns)
        for (std::size_t ir : rho)
            for (std::size_t ix : rxy)
                for (std::size_t im : ms)
                    for (std::size_t ia : as)
                        for (std::size_t in : ns) {
                            SimulationCell c;
                            c.index = ((((ip * 3 + ir) * 2 + ix) * 2 + im) * 2 + ia) * 2 + in;
                            c.pattern = static_cast<int>(ip + 1);
                            c.rho = kRhoLevels[ir];
                            c.rho_xy = kRhoXyLevels[ix];
                            c.m = kMLevels[im];
                            c.a = kALevels[ia];
                            c.n = kNLevels[in];
                            c.label = agreement_label(c.mean());
                            cells.push_back(c);
                        }
    return cells;
}

double true_rate(const SimulationCell& cell, const SimOptions& options) {
    return proposed_rate(true_distribution(cell, options), cell.a, cell.m).value;
}

Quartiles quartiles(std::vector<double> values) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    if (values.empty()) return {nan, nan, nan, 0};
    std::sort(values.begin(), values.end());
    return {quantile_type7(values, 0.25), quantile_type7(values, 0.5), quantile_type7(values, 0.75), values.size()};
}

ReplicationRecord run_replication(const SimulationCell& cell, std::size_t rep, std::uint64_t base_seed,
                                  const SimOptions& options) {
    const std::uint64_t seed = derive_seed(derive_seed(base_seed, cell.index), rep);
    const GaussianModel model = cell.model();
    GaussianSampler sampler(model, seed);
    std::vector<DiffSeries> diffs(cell.n);
    std::array<double, 4> z{};
    for (std::size_t i = 0; i < cell.n; ++i) {
        sampler.draw(i, z);
        diffs[i] = DiffSeries{std::to_string(i + 1), {z[0], z[1]}, {z[2], z[3]}};
    }

    ReplicationRecord rec;
    rec.rep = rep;
    const AgreementSpec spec{2, cell.m};
    const RateOptions ro{options.tol, options.max_evals, derive_seed(seed, kIntegrationStream)};
    for (std::size_t k = 0; k < kSimMethods.size(); ++k) {
        try {
            switch (kSimMethods[k]) {
            case Method::Ccr: rec.estimate[k] = ccr(diffs, cell.a).value; break;
            case Method::Control1: rec.estimate[k] = control1(diffs, cell.a, spec).value; break;
            case Method::Control2: rec.estimate[k] = control2(diffs, cell.a, spec).value; break;
            default: rec.estimate[k] = proposed_rate(diffs, cell.a, spec, ro).value; break;
            }
        } catch (const Error& e) {
            rec.estimate[k] = std::numeric_limits<double>::quiet_NaN();
            rec.failure[k] = e.tag();
        }
    }
    return rec;
}

CellSummary summarize_cell(double true_value, std::span<const ReplicationRecord> records) {
    CellSummary s;
    s.true_value = true_value;
    for (std::size_t j = 0; j < kBiasMethods.size(); ++j) {
        std::vector<double> dev;
        for (const auto& r : records)
            if (!std::isnan(r.estimate[j + 1])) dev.push_back(std::abs(r.estimate[j + 1] - true_value));
        s.deviation[j] = quartiles(std::move(dev));
    }
    for (const auto& r : records)
        for (std::size_t k = 0; k < kSimMethods.size(); ++k)
            if (!r.failure[k].empty()) ++s.failures[std::string(to_string(kSimMethods[k])) + ":" + r.failure[k]];
    return s;
}

CellSummary run_cell(const SimulationCell& cell, std::size_t reps, std::uint64_t base_seed, const SimOptions& options) {
    if (reps < 1) throw ParameterError("reps must be at least 1");
    const double truth = true_rate(cell, options);
    std::vector<ReplicationRecord> records;
    for (std::size_t r = 0; r < reps; ++r) records.push_back(run_replication(cell, r, base_seed, options));
    return summarize_cell(truth, records);
}

StudyResult run_study(const StudyConfig& config) {
    if (config.reps < 1) throw ConfigError("reps must be at least 1");
    StudyResult out;
    out.cells = build_factor_grid(config.grid);
    out.reps = config.reps;
    const std::size_t n_cells = out.cells.size();

    std::map<ModelKey, std::size_t> key_slot;
    std::vector<std::size_t> representative;
    for (std::size_t i = 0; i < n_cells; ++i)
        if (key_slot.emplace(model_key(out.cells[i]), representative.size()).second) representative.push_back(i);
    std::vector<AgreementDistribution> truths(representative.size());
    parallel_for(representative.size(), config.threads,
                 [&](std::size_t k) { truths[k] = true_distribution(out.cells[representative[k]], config.options); });
    out.true_rates.resize(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        const auto& c = out.cells[i];
        out.true_rates[i] = proposed_rate(truths[key_slot.at(model_key(c))], c.a, c.m).value;
    }

    out.records.resize(n_cells * config.reps);
    out.summaries.resize(n_cells);
    std::atomic<std::size_t> done{0};
    parallel_for(n_cells, config.threads, [&](std::size_t i) {
        for (std::size_t r = 0; r < config.reps; ++r) {
            auto& rec = out.records[i * config.reps + r];
            rec = run_replication(out.cells[i], r, config.base_seed, config.options);
            rec.cell = i;
        }
        out.summaries[i] = summarize_cell(
            out.true_rates[i], std::span<const ReplicationRecord>(out.records).subspan(i * config.reps, config.reps));
        const std::size_t finished = ++done;
        if (config.progress) config.progress(finished, n_cells);
    });
    return out;
}

namespace {

std::string format_level(double v) {
    if (std::abs(v - 1.0 / 3.0) < 1e-12) return "1/3";
    if (std::abs(v - 2.0 / 3.0) < 1e-12) return "2/3";
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string level_of(const SimulationCell& c, Factor f) {
    switch (f) {
    case Factor::Overall: return "all";
    case Factor::Pattern: return "Pattern" + std::to_string(c.pattern);
    case Factor::Rho: return format_level(c.rho);
    case Factor::RhoXy: return format_level(c.rho_xy);
    case Factor::M: return std::to_string(c.m);
    case Factor::A: return format_level(c.a);
    case Factor::N: return std::to_string(c.n);
    }
    return "";
}

// Numeric sort key so that Pattern10 follows Pattern9.
double order_of(const SimulationCell& c, Factor f) {
    switch (f) {
    case Factor::Overall: return 0.0;
    case Factor::Pattern: return c.pattern;
    case Factor::Rho: return c.rho;
    case Factor::RhoXy: return c.rho_xy;
    case Factor::M: return static_cast<double>(c.m);
    case Factor::A: return c.a;
    case Factor::N: return static_cast<double>(c.n);
    }
    return 0.0;
}

} // namespace

std::vector<AggregateRow> aggregate(const StudyResult& study, Factor factor) {
    std::map<double, std::pair<std::string, std::array<std::vector<double>, 3>>> groups;
    for (const auto& rec : study.records) {
        const auto& cell = study.cells[rec.cell];
        auto& g = groups[order_of(cell, factor)];
        g.first = level_of(cell, factor);
        for (std::size_t j = 0; j < kBiasMethods.size(); ++j)
            if (!std::isnan(rec.estimate[j + 1]))
                g.second[j].push_back(std::abs(rec.estimate[j + 1] - study.true_rates[rec.cell]));
    }
    std::vector<AggregateRow> rows;
    for (auto& [key, g] : groups) {
        AggregateRow row;
        row.level = g.first;
        for (std::size_t j = 0; j < 3; ++j) row.deviation[j] = quartiles(std::move(g.second[j]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ScoredLabel> diagnosability_scores(const StudyResult& study, Method method, std::size_t* skipped) {
    const auto pos = std::find(kSimMethods.begin(), kSimMethods.end(), method);
    if (pos == kSimMethods.end()) throw ParameterError("method is not part of the simulation");
    const auto k = static_cast<std::size_t>(pos - kSimMethods.begin());
    std::vector<ScoredLabel> out;
    out.reserve(study.records.size());
    std::size_t missing = 0;
    for (const auto& rec : study.records) {
        if (std::isnan(rec.estimate[k])) {
            ++missing;
            continue;
        }
        out.push_back({rec.estimate[k], study.cells[rec.cell].label});
    }
    if (skipped) *skipped = missing;
    return out;
}

Diagnosability evaluate_diagnosability(const StudyResult& study) {
    Diagnosability d;
    for (std::size_t k = 0; k < kSimMethods.size(); ++k)
        d.curves[k] = roc_curve(diagnosability_scores(study, kSimMethods[k], &d.skipped[k]));
    return d;
}

} // namespace trendcc
