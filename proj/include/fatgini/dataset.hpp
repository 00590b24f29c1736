#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fatgini/distributions.hpp"
#include "fatgini/errors.hpp"

namespace fatgini {

/// A parsed input file: plain one-value-per-line text or a CSV column.
struct InputDataset {
    std::string path;
    std::optional<std::string> column;
    Sample sample;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_value(std::string_view token, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw parse_error("not a number: '" + std::string(token) + "'", line_no);
    if (!std::isfinite(v))
        throw parse_error("non-finite value: '" + std::string(token) + "'", line_no);
    return v;
}

inline std::vector<std::string_view> split_csv_row(std::string_view row) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= row.size(); ++i) {
        if (i == row.size() || row[i] == ',') {
            fields.push_back(trim(row.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

inline void require_enough(const Sample& sample, const std::string& path) {
    if (sample.values.size() < 2)
        throw parse_error("need at least 2 values in " + path + ", got "
                          + std::to_string(sample.values.size()));
}

}  // namespace detail

/// Plain-text loader: one value per line, blank lines skipped, anything else
/// rejected with its line number.
inline InputDataset load_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);

    InputDataset ds;
    ds.path = path;
    ds.sample.seed_info = "file:" + path;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto token = detail::trim(line);
        if (token.empty()) continue;
        ds.sample.values.push_back(detail::parse_value(token, line_no));
    }
    detail::require_enough(ds.sample, path);
    return ds;
}

/// CSV loader: first row is the header; `column` selects by name, or by
/// 0-based index when it is all digits.
inline InputDataset load_csv_column(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty CSV file: " + path);
    const auto header = detail::split_csv_row(line);

    std::size_t index = header.size();
    const bool numeric =
        !column.empty() && std::all_of(column.begin(), column.end(), [](unsigned char c) {
            return std::isdigit(c);
        });
    if (numeric) {
        index = static_cast<std::size_t>(std::stoull(column));
        if (index >= header.size())
            throw parse_error("column index " + column + " out of range; file has "
                              + std::to_string(header.size()) + " columns", 1);
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == column) index = i;
        if (index == header.size()) {
            std::string names;
            for (const auto& h : header) names += (names.empty() ? "" : ", ") + std::string(h);
            throw parse_error("column '" + column + "' not found; header has: " + names, 1);
        }
    }

    InputDataset ds;
    ds.path = path;
    ds.column = column;
    ds.sample.seed_info = "file:" + path + "#" + column;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (index >= fields.size())
            throw parse_error("row has only " + std::to_string(fields.size()) + " fields",
                              line_no);
        ds.sample.values.push_back(detail::parse_value(fields[index], line_no));
    }
    detail::require_enough(ds.sample, path);
    return ds;
}

}  // namespace fatgini
