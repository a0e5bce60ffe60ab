#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "trendcc/concordance.hpp"
#include "trendcc/core.hpp"
#include "trendcc/roc.hpp"

namespace trendcc {

/// Mean of (X_1, X_2, Y_1, Y_2) for one of the 30 simulation patterns.
struct MeanPattern {
    int number;                  // 1..30
    std::array<double, 4> mu;
};

const std::array<MeanPattern, 30>& mean_patterns();

/// True when the reference and experimental means move in the same
/// direction at both periods.
bool agreement_label(const std::array<double, 4>& mu) noexcept;

inline constexpr std::array<double, 3> kRhoLevels{0.0, 1.0 / 3.0, 2.0 / 3.0};
inline constexpr std::array<double, 2> kRhoXyLevels{0.0, 1.0 / 3.0};
inline constexpr std::array<std::size_t, 2> kMLevels{1, 2};
inline constexpr std::array<double, 2> kALevels{0.5, 1.0};
inline constexpr std::array<std::size_t, 2> kNLevels{15, 40};
inline constexpr std::size_t kFullGridSize = 30 * 3 * 2 * 2 * 2 * 2;

struct SimulationCell {
    /// Position in the full default grid; seeds derive from it, so a cell
    /// keeps its random streams when the grid is restricted.
    std::size_t index = 0;
    int pattern = 1;
    double rho = 0.0;
    double rho_xy = 0.0;
    std::size_t m = 1;
    double a = 0.5;
    std::size_t n = 15;
    bool label = false;

    std::array<double, 4> mean() const;
    /// Unit variances, rho within each method, rho_xy across methods.
    Matrix cov() const;
    GaussianModel model() const;
};

/// Restricts factor levels; an empty vector keeps all levels.
struct FactorOverrides {
    std::vector<int> patterns;
    std::vector<double> rho;
    std::vector<double> rho_xy;
    std::vector<std::size_t> m;
    std::vector<double> a;
    std::vector<std::size_t> n;
};

/// Cartesian product in canonical order (pattern slowest, n fastest).
/// Throws ConfigError for a level outside the admissible sets.
std::vector<SimulationCell> build_factor_grid(const FactorOverrides& overrides = {});

struct SimOptions {
    /// Per-rectangle tolerance for the proposal on simulated data.
    double tol = 1e-4;
    /// Per-rectangle tolerance for true rates.
    double true_tol = 1e-7;
    std::int64_t max_evals = std::int64_t{1} << 22;
};

/// Proposed rate at the cell's exact mean and covariance.
double true_rate(const SimulationCell& cell, const SimOptions& options = {});

/// Estimator order used in replication records.
inline constexpr std::array<Method, 4> kSimMethods{Method::Ccr, Method::Control1, Method::Control2, Method::Proposal};

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    std::size_t count = 0;
};

/// Type-7 quartiles; all fields NaN (count 0) for an empty sample.
Quartiles quartiles(std::vector<double> values);

struct ReplicationRecord {
    std::size_t cell = 0;       // position in the study's cell list
    std::size_t rep = 0;
    /// Estimates in kSimMethods order; NaN where the estimator failed.
    std::array<double, 4> estimate{};
    /// Error tags of failed estimators, empty on success.
    std::array<std::string, 4> failure;
};

struct CellSummary {
    double true_value = 0.0;
    /// |estimate - true| for control1, control2, proposal.
    std::array<Quartiles, 3> deviation;
    /// Failed replications by "<method>:<error tag>".
    std::map<std::string, std::size_t> failures;
};

inline constexpr std::array<Method, 3> kBiasMethods{Method::Control1, Method::Control2, Method::Proposal};

/// Seeds: cell seed = derive_seed(base_seed, cell.index), replication seed
/// = derive_seed(cell seed, rep).
ReplicationRecord run_replication(const SimulationCell& cell, std::size_t rep, std::uint64_t base_seed,
                                  const SimOptions& options = {});

CellSummary summarize_cell(double true_value, std::span<const ReplicationRecord> records);

/// Runs reps replications of one cell. Throws ParameterError for reps < 1.
CellSummary run_cell(const SimulationCell& cell, std::size_t reps, std::uint64_t base_seed,
                     const SimOptions& options = {});

struct StudyConfig {
    FactorOverrides grid;
    std::size_t reps = 100;
    std::uint64_t base_seed = 0;
    unsigned threads = 1;
    SimOptions options;
    /// Called from worker threads after each finished cell.
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct StudyResult {
    std::vector<SimulationCell> cells;
    std::vector<double> true_rates;
    /// Cell-major, replication-minor.
    std::vector<ReplicationRecord> records;
    std::vector<CellSummary> summaries;
    std::size_t reps = 0;
};

/// Results are identical for any thread count.
StudyResult run_study(const StudyConfig& config);

enum class Factor { Overall, Pattern, Rho, RhoXy, M, A, N };

struct AggregateRow {
    std::string level;
    /// Pooled replication-level deviations for control1, control2, proposal.
    std::array<Quartiles, 3> deviation;
};

/// Groups replication-level deviations by the level of one factor.
std::vector<AggregateRow> aggregate(const StudyResult& study, Factor factor);

/// Score/label pairs of one estimator across all replications; failed
/// replications are skipped and counted in skipped.
std::vector<ScoredLabel> diagnosability_scores(const StudyResult& study, Method method, std::size_t* skipped = nullptr);

struct Diagnosability {
    std::array<RocCurve, 4> curves;     // kSimMethods order
    std::array<std::size_t, 4> skipped{};
};

Diagnosability evaluate_diagnosability(const StudyResult& study);

} // namespace trendcc
