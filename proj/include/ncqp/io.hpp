#pragma once

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ncqp::io {

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double v);

/// Writes a header line and numeric rows; floats use format_double.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Hex SHA-256 digest of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// `out.csv` -> `out.manifest.json`.
std::filesystem::path manifest_path(const std::filesystem::path& csv);

struct Manifest {
    std::string command;
    nlohmann::json params;
    std::optional<std::uint64_t> seed;
    std::vector<std::filesystem::path> outputs;
};

/// Writes the manifest next to the first output; returns its path.
std::filesystem::path write_manifest(const Manifest& m);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

extern const char* const kVersion;

} // namespace ncqp::io
