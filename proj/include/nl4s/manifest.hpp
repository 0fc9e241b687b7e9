#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nl4s/config.hpp"

namespace nl4s {

inline constexpr const char* kToolVersion = "0.1.0";

struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0;
  double bound = 0;
  // How value relates to bound when passing, e.g. "<=", ">=", "==".
  std::string relation;
};

struct ErrorRecord {
  std::string stage;
  std::string message;
};

struct Artifact {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  RunConfig config;
  std::string tool_version = kToolVersion;
  std::string started_at;
  double wall_time_s = 0;
  nlohmann::json outcome = nlohmann::json::object();
  std::vector<Assertion> assertions;
  std::vector<std::string> advisories;
  std::vector<ErrorRecord> errors;
  std::vector<Artifact> artifacts;

  // No errors and every assertion passed.
  bool passed() const noexcept;
  nlohmann::json to_json() const;
};

std::string sha256_hex(const std::filesystem::path& file);

// Hashes `relative` under `dir` and appends it to the manifest.
void add_artifact(RunManifest& m, const std::filesystem::path& dir, const std::string& relative);

// Writes <dir>/manifest.json.
std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& dir);

// Drops started_at and wall_time_s, the only time-dependent fields.
nlohmann::json strip_timestamps(nlohmann::json manifest);

struct VerifyReport {
  bool ok = true;
  std::size_t checked = 0;
  std::vector<std::string> problems;
};

// Re-hashes every listed artifact next to the manifest file.
VerifyReport verify_manifest(const std::filesystem::path& manifest_path);

}  // namespace nl4s
