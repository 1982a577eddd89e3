#include "specrig/io.hpp"

#include <cstdio>
#include <fstream>

#include "specrig/errors.hpp"

namespace specrig {

std::string format_double(double x) {
    char buf[40];
    // Shortest round-trip representation.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::filesystem::path& path) : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) throw ConfigError("cannot open output file " + path.string());
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << cells[i];
    }
    impl_->out << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out << j.dump(2) << '\n';
}

std::uint64_t config_hash(const nlohmann::json& j) {
    const std::string s = j.dump();   // nlohmann keeps object keys sorted
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const nlohmann::json& j) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash(j)));
    return buf;
}

} // namespace specrig
