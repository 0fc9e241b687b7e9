#include "nl4s/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "nl4s/error.hpp"

namespace nl4s {

using nlohmann::json;

bool RunManifest::passed() const noexcept {
  if (!errors.empty()) return false;
  for (const auto& a : assertions) {
    if (!a.passed) return false;
  }
  return true;
}

json RunManifest::to_json() const {
  json j;
  j["tool"] = "nl4s";
  j["tool_version"] = tool_version;
  j["started_at"] = started_at;
  j["wall_time_s"] = wall_time_s;
  j["config"] = nl4s::to_json(config);
  j["status"] = errors.empty() ? (passed() ? "pass" : "fail") : "error";
  j["outcome"] = outcome;
  json as = json::array();
  for (const auto& a : assertions) {
    as.push_back({{"name", a.name}, {"passed", a.passed}, {"value", a.value}, {"bound", a.bound}, {"relation", a.relation}});
  }
  j["assertions"] = as;
  j["advisories"] = advisories;
  json es = json::array();
  for (const auto& e : errors) es.push_back({{"stage", e.stage}, {"message", e.message}});
  j["errors"] = es;
  json arts = json::array();
  for (const auto& a : artifacts) arts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  j["artifacts"] = arts;
  return j;
}

std::string sha256_hex(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error("cannot open for hashing: " + file.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 init failed");
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    const auto got = is.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got)) != 1) {
      throw Error("SHA-256 update failed");
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("SHA-256 final failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

void add_artifact(RunManifest& m, const std::filesystem::path& dir, const std::string& relative) {
  const auto full = dir / relative;
  m.artifacts.push_back({relative, sha256_hex(full), std::filesystem::file_size(full)});
}

std::filesystem::path write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "manifest.json";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot write manifest: " + path.string());
  os << m.to_json().dump(2) << '\n';
  return path;
}

json strip_timestamps(json manifest) {
  manifest.erase("started_at");
  manifest.erase("wall_time_s");
  return manifest;
}

VerifyReport verify_manifest(const std::filesystem::path& manifest_path) {
  VerifyReport rep;
  std::ifstream is(manifest_path);
  if (!is) throw Error("cannot open manifest: " + manifest_path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw FormatError("manifest " + manifest_path.string() + ": " + e.what());
  }
  const auto dir = manifest_path.parent_path();
  for (const auto& a : j.value("artifacts", json::array())) {
    const std::string rel = a.at("path");
    const auto full = dir / rel;
    ++rep.checked;
    if (!std::filesystem::exists(full)) {
      rep.ok = false;
      rep.problems.push_back(rel + ": missing");
      continue;
    }
    const auto h = sha256_hex(full);
    if (h != a.at("sha256").get<std::string>()) {
      rep.ok = false;
      rep.problems.push_back(rel + ": hash mismatch (manifest " + a.at("sha256").get<std::string>() + ", file " + h + ")");
    }
  }
  return rep;
}

}  // namespace nl4s
