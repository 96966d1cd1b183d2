// csv.hpp — tabular result output. Numbers use the shortest decimal form
// that round-trips (std::to_chars), independent of locale, so identical
// results serialize byte-identically.

#pragma once

#include <charconv>
#include <ostream>
#include <string>

#include "gslide/experiments.hpp"

namespace gslide {

inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& out, const SweepResult& result) {
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) out << ',';
        out << result.columns[c];
    }
    out << '\n';
    for (const auto& row : result.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

}  // namespace gslide
