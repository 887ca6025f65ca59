#include "tgeo/cli/output.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "tgeo/error.hpp"

namespace tgeo::cli {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvWriter::row(std::span<const double> values) { row({}, values); }

void CsvWriter::row(std::span<const std::int64_t> ints, std::span<const double> values) {
    if (ints.size() + values.size() != width_)
        throw ValidationError("csv row width does not match the header");
    bool first = true;
    for (std::int64_t v : ints) {
        if (!first) text_ += ',';
        text_ += std::to_string(v);
        first = false;
    }
    for (double v : values) {
        if (!first) text_ += ',';
        text_ += format_double(v);
        first = false;
    }
    text_ += '\n';
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex += digits[md[i] >> 4];
        hex += digits[md[i] & 15];
    }
    return hex;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void OutputSet::add(const std::string& name, std::string content) {
    for (const auto& f : files_)
        if (f.first == name) throw ValidationError("duplicate output file '" + name + "'");
    files_.emplace_back(name, std::move(content));
}

std::vector<OutputFile> OutputSet::commit(const std::filesystem::path& dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir.string() + "'");
    std::vector<OutputFile> out;
    for (const auto& [name, content] : files_) {
        write_atomic(dir / name, content);
        out.push_back({name, sha256_hex(content), content.size()});
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot write '" + tmp.string() + "'");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw ValidationError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ValidationError("cannot move output into place at '" + path.string() + "'");
    }
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json files_json = nlohmann::json::array();
    for (const auto& f : files)
        files_json.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {{"subcommand", subcommand},
            {"config_hash", config_hash},
            {"artifact_version", artifact_version},
            {"seed", seed},
            {"started_utc", started_utc},
            {"finished_utc", finished_utc},
            {"files", files_json}};
}

std::string utc_now() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const std::time_t secs = system_clock::to_time_t(now);
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char full[48];
    std::snprintf(full, sizeof full, "%s.%03dZ", buf, static_cast<int>(ms));
    return full;
}

}  // namespace tgeo::cli
