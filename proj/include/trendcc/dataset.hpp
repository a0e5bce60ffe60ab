#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "trendcc/core.hpp"

namespace trendcc {

struct Record {
    std::string subject;
    std::size_t time = 0;   // 1-based
    std::string method;
    double value = 0.0;
};

/// Long-format measurements with every (subject, method) observed at the
/// same time points 1..K. Subjects and methods keep first-appearance order.
class Dataset {
public:
    Dataset() = default;

    /// Validates completeness. Throws DuplicateRecordError, DataError or
    /// IncompleteSeriesError (naming the subjects with gaps).
    static Dataset from_records(const std::vector<Record>& records, const std::vector<std::size_t>& lines = {});

    const std::vector<std::string>& subjects() const noexcept { return subjects_; }
    const std::vector<std::string>& methods() const noexcept { return methods_; }
    /// K = T + 1.
    std::size_t time_points() const noexcept { return time_points_; }
    bool has_method(std::string_view method) const;

    double value(const std::string& subject, const std::string& method, std::size_t time) const;

    /// Raw series for (gold, experimental). Throws DataError for unknown or
    /// identical methods.
    std::vector<MeasurementSeries> pair_series(const std::string& gold, const std::string& experimental) const;
    std::vector<DiffSeries> pair_diffs(const std::string& gold, const std::string& experimental) const;

    /// Same subjects, methods, times and values (bitwise).
    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<std::string> subjects_;
    std::vector<std::string> methods_;
    std::size_t time_points_ = 0;
    std::map<std::tuple<std::string, std::string, std::size_t>, double> values_;
};

enum class CsvFormat { Long, Wide, Auto };

CsvFormat parse_csv_format(std::string_view name);

/// Throws ParseError (with line number) on malformed input.
Dataset read_dataset(std::istream& in, CsvFormat format = CsvFormat::Auto);
Dataset read_dataset_file(const std::string& path, CsvFormat format = CsvFormat::Auto);

/// Shortest round-trip number formatting, LF line endings.
void write_long_csv(std::ostream& out, const Dataset& data);
void write_wide_csv(std::ostream& out, const Dataset& data);

/// Splits one CSV line; double quotes protect commas and "" escapes a quote.
/// Unquoted fields are trimmed, quoted ones are kept verbatim.
std::vector<std::string> split_csv_line(std::string_view line);
/// Quotes a field when it contains a comma, quote or surrounding space.
std::string csv_field(std::string_view field);
/// Shortest representation that parses back to the same double.
std::string format_number(double v);

} // namespace trendcc
