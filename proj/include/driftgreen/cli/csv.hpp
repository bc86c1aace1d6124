#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace driftgreen::cli {

/// A header row naming the columns followed by numeric rows; missing values are empty cells.
struct CurveFile {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;

    friend bool operator==(const CurveFile&, const CurveFile&) = default;
};

/// Numbers are written with 17 significant digits ("%.17g"), lines end in '\n'.
void write_csv(std::ostream& out, const CurveFile& curve);
std::string to_csv(const CurveFile& curve);

/// Inverse of write_csv. Throws std::invalid_argument on ragged rows or malformed numbers.
CurveFile parse_csv(std::istream& in);
CurveFile parse_csv(const std::string& text);

std::string format_number(double v);

} // namespace driftgreen::cli
