// Analytic ray-cast scenes with exact ground-truth normals.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dnorm/core.hpp"

namespace dnorm {

enum class SceneKind { Plane, Step, Wedge, Sphere, Corner, Sinusoid };

// Surface points p satisfy dot(normal, p) + offset = 0.
struct PlaneParams {
  Vec3 normal{0.0, 0.0, -1.0};
  double offset = 2.0;
};

// Two fronto-parallel half-planes; columns < split_column see near_depth.
struct StepParams {
  double near_depth = 2.0;
  double far_depth = 3.0;
  int split_column = 256;
};

// Two half-planes meeting at the vertical line x = ridge_x, z = ridge_z.
// Both normals must have zero y component; left covers x <= ridge_x.
struct WedgeParams {
  Vec3 left_normal{-0.5, 0.0, -0.8660254037844386};
  Vec3 right_normal{0.5, 0.0, -0.8660254037844386};
  double ridge_x = 0.0;
  double ridge_z = 2.5;
};

struct SphereParams {
  Vec3 center{0.0, 0.0, 2.0};
  double radius = 0.5;
};

// Concave corner of three mutually orthogonal walls with its apex on the
// optical axis at the given distance; the cube diagonal points away from
// the camera, so all three walls are visible.
struct CornerParams {
  double distance = 3.0;
};

// z = base_depth + amplitude * sin(frequency x) * cos(frequency y).
struct SinusoidParams {
  double amplitude = 0.05;
  double frequency = 12.566370614359172;  // rad / m
  double base_depth = 2.0;
};

struct SceneSpec {
  SceneKind kind = SceneKind::Plane;
  int width = 512;
  int height = 424;
  CameraIntrinsics K{365.0, 365.0, 256.0, 212.0};
  double max_depth = 10.0;  // hits beyond this are left invalid
  int band_radius = 3;

  PlaneParams plane{};
  StepParams step{};
  WedgeParams wedge{};
  SphereParams sphere{};
  CornerParams corner{};
  SinusoidParams sinusoid{};

  void validate() const;
};

struct SurfaceHit {
  double depth = 0.0;
  Vec3 normal{};  // unit, camera-facing
  int label = 0;  // which analytic surface piece was hit
};

// Casts the ray through (possibly fractional) pixel (u, v). Empty when the
// ray misses every surface or the hit lies beyond max_depth.
std::optional<SurfaceHit> cast_ray(const SceneSpec& spec, double u, double v);

struct Scene {
  DepthImage depth;
  NormalMap normals;
  // 1 inside the discontinuity band, 0 elsewhere; every pixel valid.
  ScalarField band;
  std::vector<int> labels;  // -1 where the ray missed
};

// Band pixels lie within band_radius (Chebyshev) of a pixel whose surface
// label differs from its left or upper neighbor (a missed ray counts as a label).
Scene generate_scene(const SceneSpec& spec);

enum class NoiseMode { Absolute, Relative };

struct NoiseSpec {
  NoiseMode mode = NoiseMode::Relative;
  double sigma = 0.005;  // meters, or fraction of depth
  std::uint64_t seed = 0;
};

// Adds independent Gaussian noise per pixel from a generator keyed by
// (seed, pixel index). Depths that become non-positive are invalidated.
// Throws std::invalid_argument for negative or non-finite sigma.
DepthImage add_gaussian_noise(const DepthImage& img, const NoiseSpec& noise);

// Standard normal deviate for (seed, counter); exposed for testing.
double gaussian_deviate(std::uint64_t seed, std::uint64_t counter);

// Plane through (0, 0, depth) tilted by slant_deg about the camera y axis.
SceneSpec tilted_plane_scene(double slant_deg, double depth, int width, int height, const CameraIntrinsics& K);

std::string_view to_string(SceneKind kind);
SceneKind parse_scene_kind(std::string_view name);
std::string_view to_string(NoiseMode mode);
NoiseMode parse_noise_mode(std::string_view name);

}  // namespace dnorm
