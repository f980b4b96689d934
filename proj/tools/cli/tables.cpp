// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0

#include "tables.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "run_config.hpp"

namespace licsctl {

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

char delimiter_for(const std::string& format) { return format == "tsv" ? '\t' : ','; }

void write_matrix(std::ostream& out, const MatrixTable& m, char delimiter) {
    for (const auto& [k, v] : m.meta) out << "# " << k << '=' << v << '\n';
    const bool two_d = !m.axis2.empty();
    out << (two_d ? "axis1\\axis2" : "axis1\\value");
    for (double v : m.axis2) out << delimiter << format_value(v);
    out << '\n';
    const std::size_t cols = two_d ? m.axis2.size() : 1;
    for (std::size_t i = 0; i < m.axis1.size(); ++i) {
        out << format_value(m.axis1[i]);
        for (std::size_t j = 0; j < cols; ++j) out << delimiter << format_value(m.cells[i * cols + j]);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delimiter)) out.push_back(field);
    return out;
}

double parse_value(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ConfigError("matrix: bad number '" + s + "'");
    return v;
}

}  // namespace

MatrixTable read_matrix(std::istream& in, char delimiter) {
    MatrixTable m;
    std::string line;
    bool header_seen = false;
    bool two_d = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("matrix: malformed header line");
            m.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        const auto fields = split(line, delimiter);
        if (fields.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            two_d = fields[0] == "axis1\\axis2";
            for (std::size_t k = 1; k < fields.size(); ++k) m.axis2.push_back(parse_value(fields[k]));
            continue;
        }
        m.axis1.push_back(parse_value(fields[0]));
        const std::size_t expected = two_d ? m.axis2.size() : 1;
        if (fields.size() != expected + 1) throw ConfigError("matrix: ragged row");
        for (std::size_t k = 1; k < fields.size(); ++k) m.cells.push_back(parse_value(fields[k]));
    }
    return m;
}

}  // namespace licsctl
