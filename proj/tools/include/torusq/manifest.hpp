#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace torusq {

inline constexpr std::string_view kToolVersion = "0.1.0";
// Default manifest timestamp, so identical runs give identical manifests.
inline constexpr std::string_view kFixedTimestamp = "1970-01-01T00:00:00Z";

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string tool_version{kToolVersion};
  std::string timestamp{kFixedTimestamp};
  std::map<std::string, std::string> checksums;  // file name -> SHA-256 hex
};

// Lowercase hex SHA-256 of a byte string or of a file's contents.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_now();

std::string manifest_json(const RunManifest& manifest);

// Writes <data_path>.manifest.json. Throws std::runtime_error on I/O failure.
std::filesystem::path write_manifest(const RunManifest& manifest,
                                     const std::filesystem::path& data_path);

}  // namespace torusq
