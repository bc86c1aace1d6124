#include "driftgreen/cli/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace driftgreen::cli {

namespace {

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell)
{
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
        throw std::invalid_argument("malformed number in CSV: '" + cell + "'");
    return v;
}

} // namespace

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const CurveFile& curve)
{
    for (std::size_t i = 0; i < curve.columns.size(); ++i)
        out << (i ? "," : "") << curve.columns[i];
    out << '\n';
    for (const auto& row : curve.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out << ',';
            if (row[i])
                out << format_number(*row[i]);
        }
        out << '\n';
    }
}

std::string to_csv(const CurveFile& curve)
{
    std::ostringstream out;
    write_csv(out, curve);
    return out.str();
}

CurveFile parse_csv(std::istream& in)
{
    CurveFile curve;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("CSV is empty");
    curve.columns = split_line(line);
    while (std::getline(in, line)) {
        const auto cells = split_line(line);
        if (cells.size() != curve.columns.size())
            throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(curve.columns.size()));
        std::vector<std::optional<double>> row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(c.empty() ? std::nullopt : std::optional<double>(parse_cell(c)));
        curve.rows.push_back(std::move(row));
    }
    return curve;
}

CurveFile parse_csv(const std::string& text)
{
    std::istringstream in(text);
    return parse_csv(in);
}

} // namespace driftgreen::cli
