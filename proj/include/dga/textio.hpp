#pragma once

// Helpers for the versioned text model formats.  Doubles are written
// with 17 significant digits so loads are bit-exact.

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dga::textio {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_row(std::ostream& out, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << ' ';
        out << fmt17(v[i]);
    }
    out << '\n';
}

inline std::string read_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(std::string("unexpected end of file reading ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

inline void expect_line(std::istream& in, const std::string& expected) {
    std::string line = read_line(in, expected.c_str());
    if (line != expected)
        throw FormatError("expected '" + expected + "', got '" + line + "'");
}

inline std::vector<double> parse_row(const std::string& line, std::size_t expect,
                                     const char* what) {
    std::vector<double> out;
    out.reserve(expect);
    const char* p = line.c_str();
    char* end = nullptr;
    while (*p) {
        while (*p == ' ') ++p;
        if (!*p) break;
        double v = std::strtod(p, &end);
        if (end == p)
            throw FormatError(std::string("bad number in ") + what);
        out.push_back(v);
        p = end;
    }
    if (out.size() != expect)
        throw FormatError(std::string(what) + ": expected " +
                          std::to_string(expect) + " values, got " +
                          std::to_string(out.size()));
    return out;
}

inline void read_matrix(std::istream& in, double* dst, std::size_t rows,
                        std::size_t cols, const char* what) {
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = parse_row(read_line(in, what), cols, what);
        for (std::size_t c = 0; c < cols; ++c) dst[r * cols + c] = row[c];
    }
}

} // namespace dga::textio
