#include "manifest.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <ctime>
#include <filesystem>
#include <fstream>

#include "kfront/csv.hpp"
#include "kfront/version.hpp"

namespace kfront::cli {
namespace {

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void Manifest::param(const std::string& key, const std::string& value) {
  params_.emplace_back(key, value);
}

void Manifest::param(const std::string& key, double value) {
  params_.emplace_back(key, format_number(value));
}

void Manifest::set_status(std::string status, std::string message) {
  status_ = std::move(status);
  message_ = std::move(message);
}

void Manifest::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / "manifest.csv");
  out << fmt::format("# timestamp: {:%Y-%m-%dT%H:%M:%SZ}\n", fmt::gmtime(std::time(nullptr)));
  out << "key,value\n";
  out << "version," << kVersion << '\n';
  out << "command," << command_ << '\n';
  out << "status," << status_ << '\n';
  out << "message," << quoted(message_) << '\n';
  for (const auto& [k, v] : params_) out << "param." << k << ',' << quoted(v) << '\n';
  for (const auto& f : files_) out << "file," << quoted(f) << '\n';
}

}  // namespace kfront::cli
