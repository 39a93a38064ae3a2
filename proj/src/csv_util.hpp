#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solarsched/error.hpp"

namespace solarsched::csv {

inline std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

// Shortest representation that parses back to the same double.
inline std::string format(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// Fixed notation with the given number of decimals.
inline std::string fixed(double v, int decimals) {
    if (v == 0.0) v = 0.0;  // drop negative zero
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    std::string s(buf, ptr);
    if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

// Line reader that tracks 1-based line numbers and skips blank lines.
class LineReader {
public:
    LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!trim(line).empty()) return true;
        }
        return false;
    }

    std::size_t line_no() const { return line_no_; }
    const std::string& source() const { return source_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

    // Reads the header and checks it matches `expected` column by column.
    void expect_header(const std::vector<std::string_view>& expected) {
        std::string line;
        if (!next(line)) fail("missing header");
        if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
        const auto cols = split(line);
        if (cols.size() != expected.size()) fail("unexpected header '" + line + "'");
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i] != expected[i]) fail("unexpected header column '" + std::string(cols[i]) + "'");
        }
    }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

}  // namespace solarsched::csv
