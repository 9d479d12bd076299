// Baseline surface-normal estimators operating on a depth image.
//
// All outputs are unit normals facing the camera. Pixels the estimator
// cannot resolve (holes, fewer than three neighbors, degenerate geometry)
// are left invalid.

#pragma once

#include <array>
#include <string_view>

#include "dnorm/core.hpp"
#include "dnorm/filters.hpp"

namespace dnorm {

enum class SneMethod { ThreeF2N, RoadSeg, D2NT, PlaneSVD };

struct SneConfig {
  SneMethod method = SneMethod::ThreeF2N;
  GradientFilter filter{};
  CentralTendency tendency{};
  int window_radius = 1;  // PlaneSVD only
};

// Neighbors whose depth offset is below this are excluded from the n_z
// aggregation (the per-neighbor quotient divides by it).
inline constexpr double kDepthDeltaFloor = 1e-8;

// n_x, n_y from the gradient of inverse depth; n_z as the negated central
// tendency of the per-neighbor tangent-plane constraints. Pixels with no
// usable neighbor fall back to the RoadSeg aggregation.
NormalMap estimate_3f2n(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg = {});

// Same n_x, n_y; the polar angle comes from aggregating the normalized
// per-neighbor normals projected on the azimuth direction.
NormalMap estimate_roadseg_nz(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg = {});

// Closed-form normal from the depth gradient:
// (fx z_u, fy z_v, -z - (u - u0) z_u - (v - v0) z_v).
NormalMap estimate_d2nt(const DepthImage& img, const CameraIntrinsics& K,
                        GradientFilter filter = {FilterKind::FD});

// Smallest-eigenvalue eigenvector of the window's point covariance.
NormalMap estimate_planesvd(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg = {});

// Dispatches on cfg.method.
NormalMap estimate_normals(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg);

struct SymmetricEigen3 {
  std::array<double, 3> values{};         // ascending
  std::array<Vec3, 3> vectors{};          // vectors[i] pairs with values[i]
  int sweeps = 0;
};

// Cyclic Jacobi rotations on a symmetric 3x3 matrix (row-major). Stops when
// the off-diagonal Frobenius norm drops below 1e-12 of the matrix norm.
SymmetricEigen3 symmetric_eigen3(const std::array<double, 9>& a);

std::string_view to_string(SneMethod method);

}  // namespace dnorm
