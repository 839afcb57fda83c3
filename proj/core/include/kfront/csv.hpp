#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace kfront {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip decimal form; stable across runs.
std::string format_number(double v);

// Writes '# key: value' lines, a header row, then numeric rows.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const Metadata& metadata = {});
  void row(const std::vector<double>& values);

 private:
  std::string path_;
  std::size_t width_;
  std::ofstream out_;
};

struct CsvTable {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace kfront
