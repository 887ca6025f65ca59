#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace tgeo::cli {

/// Decimal with 17 significant digits ("%.17g").
std::string format_double(double v);

/// Comma-separated rows with a header line.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(std::span<const double> values);
    /// Leading integer columns followed by doubles.
    void row(std::span<const std::int64_t> ints, std::span<const double> values);
    const std::string& text() const noexcept { return text_; }

private:
    std::size_t width_;
    std::string text_;
};

/// Hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

/// Serializes JSON for output files: two-space indent and a final newline.
std::string json_text(const nlohmann::json& j);

struct OutputFile {
    std::string name;
    std::string sha256;
    std::size_t bytes = 0;
};

/// Output files held in memory until the run has succeeded.
class OutputSet {
public:
    void add(const std::string& name, std::string content);
    bool empty() const noexcept { return files_.empty(); }
    /// Writes every file into `dir` (created if needed), each through a
    /// temporary and a rename. Returns the entries in insertion order.
    std::vector<OutputFile> commit(const std::filesystem::path& dir) const;

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

/// Writes `content` to `path` via a temporary file in the same directory.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct RunManifest {
    std::string subcommand;
    std::string config_hash;
    std::string artifact_version;
    std::uint64_t seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<OutputFile> files;

    nlohmann::json to_json() const;
};

/// Current time as ISO 8601 UTC with millisecond precision.
std::string utc_now();

}  // namespace tgeo::cli
