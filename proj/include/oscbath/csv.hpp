#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace oscbath {

// Strict numeric CSV: one header row, comma separators, every cell a finite
// double. Written at 17 significant digits so round-trips are bit-stable.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table,
               int precision = 17);

std::string format_double(double value, int precision = 17);

} // namespace oscbath
