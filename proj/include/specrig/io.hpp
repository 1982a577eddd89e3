#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace specrig {

/// Shortest representation that round-trips a double (%.17g trimmed).
std::string format_double(double x);

/// One CSV row from cells; numeric helpers format deterministically.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    ~CsvWriter();
    void row(const std::vector<std::string>& cells);
    static std::string num(double x) { return format_double(x); }
    static std::string num(int x) { return std::to_string(x); }

private:
    struct Impl;
    Impl* impl_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// FNV-1a 64-bit hash of the canonical (sorted-key) JSON dump; embedded in
/// every report so outputs can be traced back to their exact configuration.
std::uint64_t config_hash(const nlohmann::json& j);
std::string config_hash_hex(const nlohmann::json& j);

} // namespace specrig
