#include "pbed/density_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace pbed {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ParseError(ParseError::Kind::NonNumericCell,
                         "non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                             ", column " + std::to_string(col));
    return value;
}

std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

DensityField load_density(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(ParseError::Kind::FileNotFound,
                         "cannot open density file " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw ParseError(ParseError::Kind::MalformedHeader, "empty density file");
    auto header = split_csv_line(line);
    if (header.size() < 2)
        throw ParseError(ParseError::Kind::MalformedHeader,
                         "header must contain an empty cell followed by time points");
    {
        std::string lead = header[0];
        lead.erase(std::remove_if(lead.begin(), lead.end(),
                                  [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
                   lead.end());
        if (!lead.empty())
            throw ParseError(ParseError::Kind::MalformedHeader,
                             "first header cell must be empty, got '" + header[0] + "'");
    }

    std::vector<double> times;
    times.reserve(header.size() - 1);
    for (std::size_t c = 1; c < header.size(); ++c) times.push_back(parse_cell(header[c], 0, c));

    std::vector<double> xs;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != times.size() + 1)
            throw ParseError(ParseError::Kind::DimensionMismatch,
                             "row " + std::to_string(lineno) + " has " +
                                 std::to_string(cells.size() - 1) + " values, expected " +
                                 std::to_string(times.size()));
        xs.push_back(parse_cell(cells[0], lineno, 0));
        std::vector<double> row(times.size());
        for (std::size_t c = 0; c < times.size(); ++c)
            row[c] = parse_cell(cells[c + 1], lineno, c + 1);
        rows.push_back(std::move(row));
    }
    if (xs.size() < 2)
        throw ParseError(ParseError::Kind::DimensionMismatch,
                         "density file needs at least 2 internal grid rows");

    InternalGrid xg{xs};        // validates uniformity and positive floor
    TemporalGrid tg{times};

    Eigen::MatrixXd values(static_cast<Eigen::Index>(xs.size()),
                           static_cast<Eigen::Index>(times.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t m = 0; m < times.size(); ++m)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = rows[i][m];

    return DensityField(std::move(xg), std::move(tg), std::move(values));
}

void save_density(const DensityField& field, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write density file " + path.string());

    out << "";
    for (double t : field.tgrid().points()) out << ',' << format_cell(t);
    out << '\n';
    for (std::size_t i = 0; i < field.rows(); ++i) {
        out << format_cell(field.xgrid()[i]);
        for (std::size_t m = 0; m < field.cols(); ++m) out << ',' << format_cell(field(i, m));
        out << '\n';
    }
}

void save_density_sidecar(const DensityField& field, const std::filesystem::path& csv_path,
                          const std::string& generator_info) {
    nlohmann::json j;
    j["provenance"] = to_string(field.provenance());
    j["note"] = field.note();
    j["generator"] = generator_info;
    j["internal_grid"] = {{"x0", field.xgrid().front()},
                          {"dx", field.xgrid().spacing()},
                          {"points", field.xgrid().size()}};
    j["temporal_grid"] = {{"t0", field.tgrid()[0]},
                          {"dt", field.tgrid().spacing()},
                          {"points", field.tgrid().size()}};
    auto side = csv_path;
    side.replace_extension(".meta.json");
    std::ofstream out(side);
    if (!out) throw Error("cannot write sidecar " + side.string());
    out << j.dump(2) << '\n';
}

}  // namespace pbed
