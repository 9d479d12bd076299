// PFM float images and PNG normal visualizations.
//
// PFM layout: "Pf" (gray) or "PF" (RGB), newline, "<width> <height>",
// newline, scale, newline, then 32-bit floats with the bottom row first.
// A negative scale means little-endian. Files are always written
// little-endian with scale -1.0; big-endian input is accepted. NaN marks an
// invalid pixel in both directions.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnorm/core.hpp"

namespace dnorm {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_pfm(const std::filesystem::path& path, const ScalarField& field);
void write_pfm(const std::filesystem::path& path, const DepthImage& depth);
void write_pfm3(const std::filesystem::path& path, const NormalMap& normals);

ScalarField read_pfm(const std::filesystem::path& path);
NormalMap read_pfm3(const std::filesystem::path& path);
// Single-channel PFM as depth; NaN, non-positive and infinite values are invalid.
DepthImage read_depth_pfm(const std::filesystem::path& path);

// round-half-up(255 (c + 1) / 2) per component (x, y, z); invalid pixels black.
std::array<std::uint8_t, 3> normal_to_rgb(const Vec3& n);
void write_normal_png(const std::filesystem::path& path, const NormalMap& normals);

// Scalar field scaled linearly from [0, max_value] to gray; invalid pixels black.
void write_scalar_png(const std::filesystem::path& path, const ScalarField& field, double max_value);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB
};

RgbImage read_png_rgb(const std::filesystem::path& path);

}  // namespace dnorm
