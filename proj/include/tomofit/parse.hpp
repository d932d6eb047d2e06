#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tomofit/errors.hpp"
#include "tomofit/records.hpp"

namespace tomofit {

enum class SourceFormat { csv, json };

using AnyRecord = std::variant<CountRecord, SixCountRecord, IntensityRecord>;

/// One parsed record plus where it came from: the 1-based CSV line number or
/// the 0-based JSON array index, for diagnostics.
struct ParsedRecord {
    AnyRecord record;
    std::size_t location = 0;
};

namespace detail {

enum class RecordKind { counts4, counts6, intensity };

inline const std::vector<std::string>& schema_fields(RecordKind kind) {
    static const std::vector<std::string> four{"n_h", "n_v", "n_d", "n_r"};
    static const std::vector<std::string> six{"n_d", "n_a", "n_r", "n_l", "n_h", "n_v"};
    static const std::vector<std::string> intensity{"i_total", "i_h", "i_d", "i_r"};
    switch (kind) {
        case RecordKind::counts4: return four;
        case RecordKind::counts6: return six;
        default: return intensity;
    }
}

/// Matches a set of field names (label already removed) against the three
/// record schemas. Exact set equality only; anything else is a schema error.
inline RecordKind resolve_schema(std::vector<std::string> names, const std::string& where) {
    std::sort(names.begin(), names.end());
    for (RecordKind kind : {RecordKind::counts4, RecordKind::counts6, RecordKind::intensity}) {
        std::vector<std::string> expected = schema_fields(kind);
        std::sort(expected.begin(), expected.end());
        if (names == expected) return kind;
    }
    std::string listed;
    for (const auto& n : names) listed += (listed.empty() ? "" : ", ") + n;
    throw schema_error(where + ": field set {" + listed +
                       "} matches no recognized record schema");
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

inline double parse_field_value(std::string_view token, std::size_t line, const std::string& name) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw parse_error(line, "field '" + name + "': cannot parse '" + std::string(token) +
                                    "' as a number");
    if (!std::isfinite(value))
        throw validation_error(line, "field '" + name + "': non-finite value");
    if (value < 0.0)
        throw validation_error(line, "field '" + name + "': negative value");
    return value;
}

inline AnyRecord build_record(RecordKind kind,
                              const std::vector<std::string>& names,
                              const std::vector<double>& values,
                              std::string label) {
    auto get = [&](const char* name) {
        const auto it = std::find(names.begin(), names.end(), name);
        return values[static_cast<std::size_t>(it - names.begin())];
    };
    switch (kind) {
        case RecordKind::counts4:
            return CountRecord{get("n_h"), get("n_v"), get("n_d"), get("n_r"), std::move(label)};
        case RecordKind::counts6:
            return SixCountRecord{get("n_d"), get("n_a"), get("n_r"), get("n_l"),
                                  get("n_h"), get("n_v"), std::move(label)};
        default:
            return IntensityRecord{get("i_total"), get("i_h"), get("i_d"), get("i_r"),
                                   std::move(label)};
    }
}

inline std::vector<ParsedRecord> parse_csv(std::string_view text) {
    // Split into lines; tolerate CRLF and skip blank lines.
    std::vector<std::pair<std::string_view, std::size_t>> lines;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!trim(line).empty()) lines.emplace_back(line, line_no);
        start = nl + 1;
        if (nl == text.size()) break;
    }
    if (lines.empty()) throw parse_error(0, "empty CSV input: missing header row");

    const auto header = split_csv_line(lines.front().first);
    std::vector<std::string> names;
    int label_column = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name(header[i]);
        if (name == "label") {
            if (label_column >= 0)
                throw schema_error("CSV header: duplicate 'label' column");
            label_column = static_cast<int>(i);
            continue;
        }
        if (std::find(names.begin(), names.end(), name) != names.end())
            throw schema_error("CSV header: duplicate column '" + name + "'");
        names.push_back(name);
    }
    const RecordKind kind = resolve_schema(names, "CSV header");

    std::vector<ParsedRecord> records;
    records.reserve(lines.size() - 1);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto [line, at] = lines[r];
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw parse_error(at, "expected " + std::to_string(header.size()) +
                                      " fields, got " + std::to_string(fields.size()));
        std::string label;
        std::vector<std::string> row_names;
        std::vector<double> row_values;
        for (std::size_t i = 0, k = 0; i < header.size(); ++i) {
            if (static_cast<int>(i) == label_column) {
                label = std::string(fields[i]);
                continue;
            }
            row_names.push_back(names[k++]);
            row_values.push_back(parse_field_value(fields[i], at, row_names.back()));
        }
        records.push_back({build_record(kind, row_names, row_values, std::move(label)), at});
    }
    return records;
}

inline AnyRecord parse_json_object(const nlohmann::json& obj, std::size_t index) {
    if (!obj.is_object())
        throw schema_error("JSON record " + std::to_string(index) + ": expected an object");
    std::string label;
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& [key, value] : obj.items()) {
        if (key == "label") {
            if (!value.is_string())
                throw validation_error(index, "field 'label': expected a string");
            label = value.get<std::string>();
            continue;
        }
        if (!value.is_number())
            throw validation_error(index, "field '" + key + "': expected a number");
        const double v = value.get<double>();
        if (!std::isfinite(v))
            throw validation_error(index, "field '" + key + "': non-finite value");
        if (v < 0.0)
            throw validation_error(index, "field '" + key + "': negative value");
        names.push_back(key);
        values.push_back(v);
    }
    const RecordKind kind = resolve_schema(names, "JSON record " + std::to_string(index));
    return build_record(kind, names, values, std::move(label));
}

inline std::vector<ParsedRecord> parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(0, std::string("JSON: ") + e.what());
    }
    std::vector<ParsedRecord> records;
    if (doc.is_array()) {
        records.reserve(doc.size());
        for (std::size_t i = 0; i < doc.size(); ++i)
            records.push_back({parse_json_object(doc[i], i), i});
    } else {
        records.push_back({parse_json_object(doc, 0), 0});
    }
    return records;
}

}  // namespace detail

/// Parses measurement records from CSV (header row names the schema) or JSON
/// (one object, or a top-level array of objects). Records come back in input
/// order, each tagged with its source location. The record kind is inferred
/// from the field names only, never from field positions.
inline std::vector<ParsedRecord> parse_records(std::string_view text, SourceFormat format) {
    return format == SourceFormat::csv ? detail::parse_csv(text) : detail::parse_json(text);
}

}  // namespace tomofit
