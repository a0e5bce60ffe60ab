#include "trendcc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "trendcc/error.hpp"

namespace trendcc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_value(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        throw ParseError(line, "cannot parse value '" + std::string(field) + "'");
    if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + std::string(field) + "'");
    return v;
}

std::size_t parse_time(std::string_view field, std::size_t line) {
    field = trim(field);
    std::size_t t = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), t);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty() || t == 0)
        throw ParseError(line, "time index must be a positive integer, got '" + std::string(field) + "'");
    return t;
}

struct Line {
    std::size_t number;
    std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string text;
    for (std::size_t n = 1; std::getline(in, text); ++n) {
        if (trim(text).empty()) continue;
        if (n == 1 && text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
        lines.push_back({n, text});
    }
    if (in.bad()) throw ParseError(0, "read failure");
    return lines;
}

std::vector<std::string> header_fields(const Line& line) {
    return split_csv_line(line.text);
}

Dataset parse_long(const std::vector<Line>& lines) {
    const auto header = header_fields(lines.front());
    if (header != std::vector<std::string>{"subject", "time", "method", "value"})
        throw ParseError(lines.front().number, "long format header must be subject,time,method,value");
    std::vector<Record> records;
    std::vector<std::size_t> numbers;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv_line(lines[i].text);
        if (f.size() != 4)
            throw ParseError(lines[i].number, "expected 4 fields, found " + std::to_string(f.size()));
        Record r{f[0], parse_time(f[1], lines[i].number), f[2],
                 parse_value(f[3], lines[i].number)};
        if (r.subject.empty() || r.method.empty()) throw ParseError(lines[i].number, "empty subject or method");
        records.push_back(std::move(r));
        numbers.push_back(lines[i].number);
    }
    return Dataset::from_records(records, numbers);
}

Dataset parse_wide(const std::vector<Line>& lines) {
    const auto header = header_fields(lines.front());
    if (header.size() < 2 || header[0] != "subject")
        throw ParseError(lines.front().number, "wide format header must start with subject");
    std::vector<std::pair<std::string, std::size_t>> columns;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto& h = header[c];
        const auto cut = h.rfind('_');
        if (cut == std::string::npos || cut == 0)
            throw ParseError(lines.front().number, "column '" + h + "' is not of the form <method>_<t>");
        columns.emplace_back(h.substr(0, cut), parse_time(std::string_view(h).substr(cut + 1), lines.front().number));
    }
    std::set<std::pair<std::string, std::size_t>> seen;
    for (const auto& c : columns)
        if (!seen.insert(c).second)
            throw DuplicateRecordError(lines.front().number, "column " + c.first + "_" + std::to_string(c.second) +
                                                                 " appears twice");
    std::vector<Record> records;
    std::vector<std::size_t> numbers;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv_line(lines[i].text);
        if (f.size() != header.size())
            throw ParseError(lines[i].number, "expected " + std::to_string(header.size()) + " fields, found " +
                                                  std::to_string(f.size()));
        const std::string& subject = f[0];
        if (subject.empty()) throw ParseError(lines[i].number, "empty subject");
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (f[c + 1].empty()) continue;   // reported as a gap below
            records.push_back({subject, columns[c].second, columns[c].first, parse_value(f[c + 1], lines[i].number)});
            numbers.push_back(lines[i].number);
        }
    }
    return Dataset::from_records(records, numbers);
}

} // namespace

Dataset Dataset::from_records(const std::vector<Record>& records, const std::vector<std::size_t>& lines) {
    Dataset d;
    std::size_t max_time = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Record& r = records[i];
        const std::size_t line = i < lines.size() ? lines[i] : i + 1;
        if (r.time == 0) throw ParseError(line, "time index must be positive");
        if (!std::isfinite(r.value)) throw ParseError(line, "non-finite value");
        if (!d.values_.emplace(std::make_tuple(r.subject, r.method, r.time), r.value).second)
            throw DuplicateRecordError(line, "duplicate record for subject " + r.subject + ", method " + r.method +
                                                 ", time " + std::to_string(r.time));
        if (std::find(d.subjects_.begin(), d.subjects_.end(), r.subject) == d.subjects_.end())
            d.subjects_.push_back(r.subject);
        if (std::find(d.methods_.begin(), d.methods_.end(), r.method) == d.methods_.end())
            d.methods_.push_back(r.method);
        max_time = std::max(max_time, r.time);
    }
    if (d.subjects_.empty()) throw DataError("dataset has no records");
    if (max_time < 2) throw DataError("at least two time points are required");
    d.time_points_ = max_time;

    std::vector<std::string> incomplete;
    for (const auto& s : d.subjects_) {
        bool complete = true;
        for (const auto& m : d.methods_)
            for (std::size_t t = 1; t <= max_time && complete; ++t)
                complete = d.values_.count(std::make_tuple(s, m, t)) > 0;
        if (!complete) incomplete.push_back(s);
    }
    if (!incomplete.empty()) {
        std::string list;
        for (std::size_t i = 0; i < incomplete.size(); ++i) list += (i ? ", " : "") + incomplete[i];
        throw IncompleteSeriesError(incomplete, "incomplete series (every method needs times 1.." +
                                                    std::to_string(max_time) + ") for subjects: " + list);
    }
    return d;
}

bool Dataset::has_method(std::string_view method) const {
    return std::find(methods_.begin(), methods_.end(), method) != methods_.end();
}

double Dataset::value(const std::string& subject, const std::string& method, std::size_t time) const {
    const auto it = values_.find(std::make_tuple(subject, method, time));
    if (it == values_.end())
        throw DataError("no value for subject " + subject + ", method " + method + ", time " + std::to_string(time));
    return it->second;
}

std::vector<MeasurementSeries> Dataset::pair_series(const std::string& gold, const std::string& experimental) const {
    for (const auto* m : {&gold, &experimental})
        if (!has_method(*m)) throw DataError("method '" + *m + "' is not in the dataset");
    if (gold == experimental) throw DataError("a pair needs two different methods");
    std::vector<MeasurementSeries> out;
    out.reserve(subjects_.size());
    for (const auto& s : subjects_) {
        MeasurementSeries ms{s, {}, {}};
        for (std::size_t t = 1; t <= time_points_; ++t) {
            ms.x_raw.push_back(value(s, gold, t));
            ms.y_raw.push_back(value(s, experimental, t));
        }
        out.push_back(std::move(ms));
    }
    return out;
}

std::vector<DiffSeries> Dataset::pair_diffs(const std::string& gold, const std::string& experimental) const {
    const auto series = pair_series(gold, experimental);
    return compute_differences(series);
}

CsvFormat parse_csv_format(std::string_view name) {
    if (name == "long") return CsvFormat::Long;
    if (name == "wide") return CsvFormat::Wide;
    if (name == "auto") return CsvFormat::Auto;
    throw ConfigError("unknown CSV format '" + std::string(name) + "' (long, wide or auto)");
}

Dataset read_dataset(std::istream& in, CsvFormat format) {
    const auto lines = read_lines(in);
    if (lines.empty()) throw ParseError(0, "empty input");
    if (format == CsvFormat::Auto) {
        const auto header = header_fields(lines.front());
        format = header == std::vector<std::string>{"subject", "time", "method", "value"} ? CsvFormat::Long
                                                                                          : CsvFormat::Wide;
    }
    return format == CsvFormat::Long ? parse_long(lines) : parse_wide(lines);
}

Dataset read_dataset_file(const std::string& path, CsvFormat format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_dataset(in, format);
}

void write_long_csv(std::ostream& out, const Dataset& data) {
    out << "subject,time,method,value\n";
    for (const auto& s : data.subjects())
        for (const auto& m : data.methods())
            for (std::size_t t = 1; t <= data.time_points(); ++t)
                out << csv_field(s) << ',' << t << ',' << csv_field(m) << ',' << format_number(data.value(s, m, t))
                    << '\n';
}

void write_wide_csv(std::ostream& out, const Dataset& data) {
    out << "subject";
    for (const auto& m : data.methods())
        for (std::size_t t = 1; t <= data.time_points(); ++t) out << ',' << csv_field(m + "_" + std::to_string(t));
    out << '\n';
    for (const auto& s : data.subjects()) {
        out << csv_field(s);
        for (const auto& m : data.methods())
            for (std::size_t t = 1; t <= data.time_points(); ++t) out << ',' << format_number(data.value(s, m, t));
        out << '\n';
    }
}

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t i = 0;
    for (;;) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::string field;
        if (i < line.size() && line[i] == '"') {
            // Quoted content is kept verbatim, including surrounding spaces.
            for (++i; i < line.size(); ++i) {
                if (line[i] != '"') {
                    field += line[i];
                } else if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    ++i;
                    break;
                }
            }
            while (i < line.size() && line[i] != ',') ++i;
        } else {
            const std::size_t end = std::min(line.find(',', i), line.size());
            field = std::string(trim(line.substr(i, end - i)));
            i = end;
        }
        fields.push_back(std::move(field));
        if (i >= line.size()) break;
        ++i;   // comma
    }
    return fields;
}

std::string csv_field(std::string_view field) {
    const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                       (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace trendcc
