#include "ncqp/io.hpp"

#include "ncqp/dataset.hpp"
#include "ncqp/errors.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace ncqp {

namespace io {

const char* const kVersion = "1.0.0";

std::string format_double(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot open output file " + path.string());
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_double(row[i]);
        }
        out << '\n';
    }
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read " + path.string());
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

std::filesystem::path manifest_path(const std::filesystem::path& csv)
{
    auto p = csv;
    p.replace_extension(".manifest.json");
    return p;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot open output file " + path.string());
    }
    out << j.dump(2) << '\n';
}

std::filesystem::path write_manifest(const Manifest& m)
{
    if (m.outputs.empty()) {
        throw ValidationError("manifest needs at least one output");
    }
    nlohmann::json j;
    j["command"] = m.command;
    j["params"] = m.params;
    j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
    j["version"] = kVersion;
    const auto now = std::chrono::system_clock::now();
    j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    j["outputs"] = nlohmann::json::array();
    for (const auto& p : m.outputs) {
        j["outputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
    }
    const auto path = manifest_path(m.outputs.front());
    write_json(path, j);
    return path;
}

} // namespace io

double reduce_phase(double phi)
{
    double r = std::fmod(phi, std::numbers::pi);
    if (r < 0.0) {
        r += std::numbers::pi;
    }
    if (r >= std::numbers::pi) {
        r = 0.0;
    }
    return r;
}

namespace {

bool parse_double(std::string_view cell, double& out)
{
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
        cell.remove_suffix(1);
    }
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return res.ec == std::errc() && res.ptr == cell.data() + cell.size() && std::isfinite(out);
}

} // namespace

QuadratureDataset ingest_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read dataset " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("dataset " + path.string() + " is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "x,phi") {
        throw ValidationError("dataset line 1: expected header 'x,phi'");
    }
    QuadratureDataset data;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto comma = line.find(',');
        double x = 0.0;
        double phi = 0.0;
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos
            || !parse_double(std::string_view(line).substr(0, comma), x)
            || !parse_double(std::string_view(line).substr(comma + 1), phi)) {
            throw ValidationError("dataset line " + std::to_string(number) + ": expected two numeric cells");
        }
        // x(phi + pi) = -x(phi): shifting the phase by an odd multiple of pi flips the sign.
        const double turns = std::floor(phi / std::numbers::pi);
        if (std::fmod(std::fabs(turns), 2.0) == 1.0) {
            x = -x;
        }
        data.records.push_back({x, reduce_phase(phi)});
    }
    if (data.records.empty()) {
        throw ValidationError("dataset " + path.string() + " has no records");
    }
    data.provenance["file"] = path.string();
    data.provenance["count"] = data.records.size();
    return data;
}

void write_dataset(const std::filesystem::path& path, const QuadratureDataset& data)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(data.size());
    for (const auto& r : data.records) {
        rows.push_back({r.x, r.phi});
    }
    io::write_csv(path, {"x", "phi"}, rows);
}

} // namespace ncqp
