#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kfront::cli {

// manifest.csv: one '# timestamp:' line (the only non-deterministic line),
// then key,value rows in insertion order.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, double value);
  void file(const std::string& name) { files_.push_back(name); }
  void set_status(std::string status, std::string message = {});

  void write(const std::string& dir) const;

 private:
  std::string command_;
  std::string status_ = "ok";
  std::string message_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::vector<std::string> files_;
};

}  // namespace kfront::cli
