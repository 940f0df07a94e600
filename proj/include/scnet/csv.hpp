#pragma once

// Minimal numeric CSV: comma-separated, no quoting, first line is a header.

#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "scnet/errors.hpp"

namespace scnet::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> lines;   // raw text of each data row
    std::vector<std::size_t> line_no; // 1-based source line of each data row
};

inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline Table read(std::istream& in) {
    Table t;
    std::string line;
    std::size_t no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw ParseError(ParseErrorKind::Csv, "line " + std::to_string(no),
                             "expected " + std::to_string(t.header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
        t.lines.push_back(line);
        t.line_no.push_back(no);
    }
    if (!have_header) {
        throw ParseError(ParseErrorKind::Csv, "line 1", "missing header");
    }
    return t;
}

inline double parse_real(std::string_view field, const std::string& where) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(ParseErrorKind::Csv, where, "not a number: '" + std::string(field) + "'");
    }
    return v;
}

// Shortest decimal that round-trips.
inline std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

inline void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

// Rows of a logits file: columns x0..x{n-1}, y0..y{m-1}, optionally abstain.
struct LogitTable {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<std::vector<double>> xs;
    std::vector<std::vector<double>> ys;
    std::optional<std::vector<int>> abstain;
    Table raw;
};

inline LogitTable parse_logits(Table table, std::size_t n, std::size_t m) {
    const auto& h = table.header;
    const bool has_abstain = h.size() == n + m + 1 && h.back() == "abstain";
    if (h.size() != n + m && !has_abstain) {
        throw ParseError(ParseErrorKind::Csv, "line 1",
                         "expected " + std::to_string(n + m) + " columns x0..x" + std::to_string(n - 1) +
                             ",y0..y" + std::to_string(m - 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (h[i] != "x" + std::to_string(i)) {
            throw ParseError(ParseErrorKind::Csv, "line 1", "column " + std::to_string(i) + " should be x" +
                                                                std::to_string(i) + ", found '" + h[i] + "'");
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (h[n + j] != "y" + std::to_string(j)) {
            throw ParseError(ParseErrorKind::Csv, "line 1", "column " + std::to_string(n + j) +
                                                                " should be y" + std::to_string(j) +
                                                                ", found '" + h[n + j] + "'");
        }
    }
    LogitTable out;
    out.n = n;
    out.m = m;
    if (has_abstain) out.abstain.emplace();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = "line " + std::to_string(table.line_no[r]);
        std::vector<double> x(n), y(m);
        for (std::size_t i = 0; i < n; ++i) x[i] = parse_real(row[i], where);
        for (std::size_t j = 0; j < m; ++j) y[j] = parse_real(row[n + j], where);
        out.xs.push_back(std::move(x));
        out.ys.push_back(std::move(y));
        if (has_abstain) out.abstain->push_back(static_cast<int>(parse_real(row.back(), where)));
    }
    out.raw = std::move(table);
    return out;
}

} // namespace scnet::csv
