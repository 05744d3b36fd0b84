#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bgpburst::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct FileDigest {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Record of one CLI run, written as manifest.json in the output directory.
class RunManifest {
public:
  RunManifest(std::string command, std::vector<std::string> argv,
              std::filesystem::path out_dir);

  const std::filesystem::path& out_dir() const noexcept { return out_dir_; }

  nlohmann::ordered_json& config() noexcept { return config_; }

  void add_input(const std::filesystem::path& path);
  /// `path` is relative to the output directory.
  void add_output(const std::filesystem::path& path);
  void add_error(std::string message);

  const std::vector<FileDigest>& inputs() const noexcept { return inputs_; }
  const std::vector<FileDigest>& outputs() const noexcept { return outputs_; }
  const std::vector<std::string>& errors() const noexcept { return errors_; }

  /// Writes manifest.json. Outputs are listed in the order registered.
  void write() const;

private:
  std::string command_;
  std::vector<std::string> argv_;
  std::filesystem::path out_dir_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::vector<FileDigest> inputs_;
  std::vector<FileDigest> outputs_;
  std::vector<std::string> errors_;
  std::chrono::steady_clock::time_point started_;
};

} // namespace bgpburst::cli
