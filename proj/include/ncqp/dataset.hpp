#pragma once

#include "json.hpp"

#include <filesystem>
#include <vector>

namespace ncqp {

/// One homodyne sample: quadrature value x at phase phi in [0, pi).
struct QuadratureRecord {
    double x;
    double phi;
};

struct QuadratureDataset {
    std::vector<QuadratureRecord> records;
    nlohmann::json provenance; ///< state and seed, or the source file

    [[nodiscard]] std::size_t size() const { return records.size(); }
};

/// Reads a CSV with header `x,phi`. Phases are reduced into [0, pi).
/// Throws ValidationError naming the offending line.
QuadratureDataset ingest_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const QuadratureDataset& data);

/// phi reduced modulo pi into [0, pi).
double reduce_phase(double phi);

} // namespace ncqp
