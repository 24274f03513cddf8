#pragma once

#include <string>
#include <vector>

namespace evoro {

// Comma-separated table with '#' comment lines skipped. Fields in this
// project's files are plain numbers and ids, so no quoting is involved.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws std::invalid_argument when missing.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

CsvTable parse_csv(const std::string& text);

std::string read_file(const std::string& path);   // throws std::runtime_error
void write_file(const std::string& path, const std::string& content);

}  // namespace evoro
