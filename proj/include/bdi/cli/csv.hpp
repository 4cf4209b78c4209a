#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bdi::cli {

// Shortest-safe round-trip form: 17 significant digits.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Comma separated, header row, LF endings.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
std::string to_csv(const CsvTable& table);
// Reads files produced by write_csv. Throws std::runtime_error on
// malformed input.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace bdi::cli
