#include "oscbath/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oscbath/errors.hpp"

namespace oscbath {

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return columns[i];
    throw config_error("csv: missing column '" + name + "'");
}

std::string format_double(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("csv: cannot open '" + path.string() + "'");

    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (line_no == 1) {
            table.header = cells;
            table.columns.assign(cells.size(), {});
            continue;
        }
        if (cells.size() != table.header.size())
            throw config_error("csv: '" + path.string() + "' line " +
                               std::to_string(line_no) + ": expected " +
                               std::to_string(table.header.size()) + " cells, got " +
                               std::to_string(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = 0.0;
            const char* first = cells[i].data();
            const char* last = first + cells[i].size();
            while (first < last && *first == ' ') ++first;
            const auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc{} || res.ptr != last)
                throw config_error("csv: '" + path.string() + "' line " +
                                   std::to_string(line_no) + ": bad number '" +
                                   cells[i] + "'");
            table.columns[i].push_back(v);
        }
    }
    if (table.header.empty())
        throw config_error("csv: '" + path.string() + "' is empty");
    return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table, int precision) {
    if (table.columns.size() != table.header.size())
        throw config_error("csv: header/column count mismatch");
    std::ofstream out(path);
    if (!out) throw config_error("csv: cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    const std::size_t rows = table.rows();
    for (const auto& col : table.columns)
        if (col.size() != rows) throw config_error("csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out << ',';
            out << format_double(table.columns[i][r], precision);
        }
        out << '\n';
    }
    if (!out) throw config_error("csv: write failure on '" + path.string() + "'");
}

} // namespace oscbath
