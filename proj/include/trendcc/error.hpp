#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace trendcc {

/// Broad failure category. The CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorKind { Config, Data, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string tag, const std::string& message)
        : std::runtime_error(message), kind_(kind), tag_(std::move(tag)) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Stable machine-readable identifier, e.g. "all-mass-excluded".
    const std::string& tag() const noexcept { return tag_; }

private:
    ErrorKind kind_;
    std::string tag_;
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error(ErrorKind::Config, "parameter", msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorKind::Config, "config", msg) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(ErrorKind::Config, "dimension-mismatch", msg) {}
};

/// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : Error(ErrorKind::Data, "parse", line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IncompleteSeriesError : public Error {
public:
    IncompleteSeriesError(std::vector<std::string> subjects, const std::string& msg)
        : Error(ErrorKind::Data, "incomplete-series", msg), subjects_(std::move(subjects)) {}
    const std::vector<std::string>& subjects() const noexcept { return subjects_; }

private:
    std::vector<std::string> subjects_;
};

class DuplicateRecordError : public Error {
public:
    DuplicateRecordError(std::size_t line, const std::string& msg)
        : Error(ErrorKind::Data, "duplicate-record", "line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid measurement data (non-finite values, unequal lengths, too few subjects).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(ErrorKind::Data, "data", msg) {}
};

class EstimationError : public Error {
public:
    explicit EstimationError(const std::string& msg) : Error(ErrorKind::Data, "estimation", msg) {}
};

/// Cholesky breakdown. pivot() is 1-based.
class DecompositionError : public Error {
public:
    DecompositionError(std::size_t pivot, double value)
        : Error(ErrorKind::Numerical, "decomposition",
                "matrix is not positive definite: pivot " + std::to_string(pivot) + " is " + std::to_string(value)),
          pivot_(pivot), value_(value) {}
    std::size_t pivot() const noexcept { return pivot_; }
    double value() const noexcept { return value_; }

private:
    std::size_t pivot_;
    double value_;
};

/// Covariance that is singular or indefinite; carries its eigenvalues (ascending).
class DegenerateModelError : public Error {
public:
    DegenerateModelError(std::vector<double> eigenvalues, const std::string& msg)
        : Error(ErrorKind::Numerical, "degenerate-model", msg), eigenvalues_(std::move(eigenvalues)) {}
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

private:
    std::vector<double> eigenvalues_;
};

class UndefinedRateError : public Error {
public:
    explicit UndefinedRateError(const std::string& msg) : Error(ErrorKind::Numerical, "undefined-rate", msg) {}
};

class AllMassExcludedError : public Error {
public:
    explicit AllMassExcludedError(const std::string& msg) : Error(ErrorKind::Numerical, "all-mass-excluded", msg) {}
};

class NumericalInconsistencyError : public Error {
public:
    explicit NumericalInconsistencyError(const std::string& msg)
        : Error(ErrorKind::Numerical, "numerical-inconsistency", msg) {}
};

class DegenerateLabelsError : public Error {
public:
    explicit DegenerateLabelsError(const std::string& msg) : Error(ErrorKind::Data, "degenerate-labels", msg) {}
};

inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Data: return 3;
    case ErrorKind::Numerical: return 4;
    }
    return 1;
}

} // namespace trendcc
