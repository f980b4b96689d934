// Copyright (C) 2026 licsctl authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace licsctl {

/// Decimal text with 9 significant digits; non-finite values print as nan/inf.
std::string format_value(double v);

/// A sweep matrix as written to disk: `# key=value` header lines, then a row of
/// axis2 values behind a corner label, then one row per axis1 value.
struct MatrixTable {
    std::map<std::string, std::string> meta;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> cells;  // row-major, axis1 x axis2
};

void write_matrix(std::ostream& out, const MatrixTable& m, char delimiter);
MatrixTable read_matrix(std::istream& in, char delimiter);

char delimiter_for(const std::string& format);

}  // namespace licsctl
