#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace rgl {

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Writes a CSV body preceded by two comment lines: the run configuration
/// (compact JSON) and the SHA-256 of the body.
void write_csv_with_provenance(const std::filesystem::path& path, const nlohmann::json& config,
                               const std::string& body);

/// Writes {"config": ..., "sha256": digest of result.dump(), "result": ...}.
void write_json_with_provenance(const std::filesystem::path& path, const nlohmann::json& config,
                                const nlohmann::json& result);

}  // namespace rgl
