#pragma once

#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace solcoll::io {

// Minimal CSV writer: one header row, numeric rows at 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  const std::string& path() const noexcept { return path_; }
  void close();

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string line_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> column_values(const std::string& name) const;
};

// Reads a numeric CSV written by CsvWriter ("nan"/"inf" accepted).
CsvTable read_csv(const std::string& path);

}  // namespace solcoll::io
