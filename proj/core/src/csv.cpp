#include "kfront/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <sstream>

#include "kfront/errors.hpp"

namespace kfront {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const Metadata& metadata)
    : path_(path), width_(columns.size()), out_(path) {
  if (!out_) throw ConfigError("cannot write " + path);
  for (const auto& [k, v] : metadata) out_ << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) {
    throw std::invalid_argument(fmt::format("{}: row has {} values, header has {}", path_,
                                            values.size(), width_));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << (i ? "," : "") << format_number(values[i]);
  }
  out_ << '\n';
  if (!out_) throw SolverError("write failed: " + path_);
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("missing CSV column '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        table.metadata[trim(line.substr(1, colon - 1))] = trim(line.substr(colon + 1));
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (table.columns.empty()) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(trim(cell));
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}:{}: not a number: '{}'", path, line_no, cell));
      }
    }
    if (row.size() != table.columns.size()) {
      throw ConfigError(fmt::format("{}:{}: expected {} fields", path, line_no,
                                    table.columns.size()));
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw ConfigError(path + ": no header row");
  return table;
}

}  // namespace kfront
