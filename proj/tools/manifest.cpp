#include "manifest.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "bgpburst/error.hpp"

#ifndef BGPBURST_VERSION
#define BGPBURST_VERSION "0.0.0"
#endif

namespace bgpburst::cli {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                             EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 initialisation failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv,
                         fs::path out_dir)
    : command_(std::move(command)), argv_(std::move(argv)),
      out_dir_(std::move(out_dir)), started_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const fs::path& path) {
  inputs_.push_back({path.string(), sha256_file(path), fs::file_size(path)});
}

void RunManifest::add_output(const fs::path& path) {
  auto full = out_dir_ / path;
  outputs_.push_back({path.generic_string(), sha256_file(full),
                      fs::file_size(full)});
}

void RunManifest::add_error(std::string message) {
  errors_.push_back(std::move(message));
}

void RunManifest::write() const {
  auto digests = [](const std::vector<FileDigest>& files) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : files)
      arr.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return arr;
  };
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started_;
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["argv"] = argv_;
  j["tool_version"] = BGPBURST_VERSION;
  j["config"] = config_;
  j["inputs"] = digests(inputs_);
  j["outputs"] = digests(outputs_);
  j["errors"] = errors_;
  j["duration_seconds"] = elapsed.count();
  std::ofstream out(out_dir_ / "manifest.json");
  out << j.dump(2) << '\n';
  if (!out)
    throw Error("cannot write manifest in " + out_dir_.string());
}

} // namespace bgpburst::cli
