#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ybm {

inline constexpr const char* kVersion = "0.1.0";

// Round-trip-exact serialization (17 significant digits).
std::string formatDouble(double x);

// One CSV per table: header line, then rows serialized with
// formatDouble. Creates parent directories.
void writeCsv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::vector<double>>& rows);

// 64-bit FNV-1a over the file bytes, as hex.
std::string fileDigest(const std::filesystem::path& path);
std::uint64_t fnv1a64(const void* data, std::size_t n);

// Key/value configuration: "key = value" lines with optional [section]
// headers and #/; comments.
std::map<std::string, std::string> parseKeyValueFile(const std::string& text);

// Run manifest: command, config snapshot, seeds, code version, timing and
// the digests of every artifact. Written last so its presence marks a
// completed run.
class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::string configSnapshot);
  void addSeed(const std::string& name, std::uint64_t value);
  void addOutput(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::string config_;
  std::string startedAt_;
  std::vector<std::pair<std::string, std::uint64_t>> seeds_;
  std::vector<std::filesystem::path> outputs_;
};

} // namespace ybm
