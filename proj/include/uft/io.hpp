#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uft/alignment.hpp"
#include "uft/measures.hpp"

namespace uft {

/// Raw tensor as stored on disk: magic "UFT1", u32 LE rank, u32 LE dims,
/// row-major f32 LE payload.
struct Tensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;
};

void write_tensor(const std::string& path, const Tensor& t);
Tensor read_tensor(const std::string& path);

void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

void write_vector(const std::string& path, const Vector& v);
Vector read_vector(const std::string& path);

/// One feature vector per line, comma-separated.
FeatureSet read_csv_features(const std::string& path);

/// Structured text sidecar, one "key: value" per line.
void write_sidecar(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv);
std::vector<std::pair<std::string, std::string>> read_sidecar(
    const std::string& path);

/// Pyramid as one tensor file per level plus a manifest listing shapes.
void write_pyramid(const std::string& manifest_path,
                   const FeaturePyramid& pyramid);
FeaturePyramid read_pyramid(const std::string& manifest_path);

/// Deterministic formatting for values in sidecars and reports.
std::string format_double(double v);

}  // namespace uft
