#include "ybm/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ybm {

std::string formatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void writeCsv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("writeCsv: cannot open " + path.string());
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << formatDouble(row[i]);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("writeCsv: write failed for " + path.string());
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fileDigest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("fileDigest: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  char out[20];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return out;
}

std::map<std::string, std::string> parseKeyValueFile(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  auto trim = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';' || s[0] == '[') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value', got: " + s);
    kv[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
  }
  return kv;
}

ManifestWriter::ManifestWriter(std::string command, std::string configSnapshot)
    : command_(std::move(command)), config_(std::move(configSnapshot)) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  startedAt_ = buf;
}

void ManifestWriter::addSeed(const std::string& name, std::uint64_t value) {
  seeds_.emplace_back(name, value);
}

void ManifestWriter::addOutput(const std::filesystem::path& path) {
  outputs_.push_back(path);
}

void ManifestWriter::write(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["command"] = command_;
  j["config"] = config_;
  j["codeVersion"] = kVersion;
  j["startedAt"] = startedAt_;
  {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    j["finishedAt"] = buf;
  }
  nlohmann::json seeds = nlohmann::json::object();
  for (const auto& [name, v] : seeds_) seeds[name] = v;
  j["seeds"] = seeds;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& out : outputs_) {
    outs.push_back({{"path", out.string()}, {"digest", fileDigest(out)}});
  }
  j["outputs"] = outs;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("manifest: cannot open " + path.string());
  f << j.dump(2) << "\n";
}

} // namespace ybm
