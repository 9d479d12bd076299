// Image, camera and 3x3 neighborhood types shared by every estimator.
//
// Pixel coordinates are (u, v) = (column, row) with v pointing down. All
// grids are stored row-major with a parallel validity mask; a pixel whose
// mask entry is zero carries no meaningful value.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dnorm {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Angle between two non-zero vectors in radians, robust to rounding.
double angle_between(const Vec3& a, const Vec3& b);

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;

  // Throws std::invalid_argument unless fx, fy > 0 and u0, v0 finite.
  void validate() const;
};

template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height), values_(checked_size(width, height), fill),
        mask_(values_.size(), 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  bool contains(int u, int v) const { return u >= 0 && v >= 0 && u < width_ && v < height_; }
  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(u);
  }

  const T& operator()(int u, int v) const { return values_[index(u, v)]; }
  T& operator()(int u, int v) { return values_[index(u, v)]; }

  bool valid(int u, int v) const { return mask_[index(u, v)] != 0; }
  bool valid_at(std::size_t i) const { return mask_[i] != 0; }

  void set(int u, int v, const T& value) {
    values_[index(u, v)] = value;
    mask_[index(u, v)] = 1;
  }
  void set_at(std::size_t i, const T& value) {
    values_[i] = value;
    mask_[i] = 1;
  }
  void invalidate(int u, int v) { mask_[index(u, v)] = 0; }
  void invalidate_at(std::size_t i) { mask_[i] = 0; }

  std::span<const T> values() const { return values_; }
  std::span<T> values() { return values_; }
  std::span<const std::uint8_t> mask() const { return mask_; }
  std::span<std::uint8_t> mask() { return mask_; }

  std::size_t valid_count() const {
    std::size_t n = 0;
    for (auto m : mask_) n += (m != 0);
    return n;
  }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 0 || height < 0) throw std::invalid_argument("grid dimensions must be non-negative");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
  std::vector<std::uint8_t> mask_;
};

using ScalarField = Grid<double>;
using NormalMap = Grid<Vec3>;

// Metric depth along the optical axis. A pixel is valid only if its depth
// is finite and strictly positive; set_depth enforces this.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height) : z_(width, height) {}

  // Builds from a row-major array; non-finite or non-positive entries
  // become invalid pixels.
  static DepthImage from_values(int width, int height, std::span<const double> z);

  int width() const { return z_.width(); }
  int height() const { return z_.height(); }
  std::size_t size() const { return z_.size(); }
  bool contains(int u, int v) const { return z_.contains(u, v); }
  std::size_t index(int u, int v) const { return z_.index(u, v); }

  double depth(int u, int v) const { return z_(u, v); }
  bool valid(int u, int v) const { return z_.valid(u, v); }
  bool valid_at(std::size_t i) const { return z_.valid_at(i); }

  // Returns false (and leaves the pixel invalid) for unusable depths.
  bool set_depth(int u, int v, double z);
  void invalidate(int u, int v) { z_.invalidate(u, v); }

  std::span<const double> values() const { return z_.values(); }
  std::span<const std::uint8_t> mask() const { return z_.mask(); }

  // The depth as a plain scalar field (same mask).
  const ScalarField& field() const { return z_; }

 private:
  ScalarField z_;
};

// Back-projects pixel (u, v) at depth z through the pinhole model.
// Throws std::invalid_argument for non-positive or non-finite z.
Vec3 unproject(double u, double v, double z, const CameraIntrinsics& K);

// Inverse of unproject: returns (u, v, z) packed in a Vec3.
Vec3 project(const Vec3& p, const CameraIntrinsics& K);

// Flips n if needed so that it faces the camera, i.e. dot(n, point) <= 0.
Vec3 orient_towards_camera(const Vec3& n, const Vec3& point);

enum class NeighborIndex : int { NW = 0, N, NE, W, E, SW, S, SE };

inline constexpr int kNeighborCount = 8;

// Neighbor offsets (du, dv) in the fixed row-major order NW, N, NE, W, E, SW, S, SE.
inline constexpr std::array<std::array<int, 2>, kNeighborCount> kNeighborOffsets = {{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

// Index of the neighbor that sees the current pixel from the opposite side.
constexpr int opposite_neighbor(int i) { return kNeighborCount - 1 - i; }

struct Neighborhood {
  int u = 0;
  int v = 0;
  // Slot 0 is the center q; slots 1..8 are p_1..p_8.
  std::array<double, kNeighborCount + 1> depths{};
  std::array<Vec3, kNeighborCount + 1> cam_points{};
  std::array<bool, kNeighborCount> present{};
  // p_i - q, meaningful only where present[i].
  std::array<Vec3, kNeighborCount> deltas{};

  int present_count() const;
  double center_depth() const { return depths[0]; }
  double neighbor_depth(int i) const { return depths[static_cast<std::size_t>(i) + 1]; }
  const Vec3& center_point() const { return cam_points[0]; }
};

// Gathers the 3x3 neighborhood of (u, v). Neighbors outside the image or on
// invalid depth are flagged absent. Throws std::invalid_argument if the
// center is outside the image or invalid.
Neighborhood neighborhood(const DepthImage& img, const CameraIntrinsics& K, int u, int v);

// Same as neighborhood() without the validity check on the center; the
// caller guarantees img.valid(u, v). Used in per-pixel hot loops.
void gather_neighborhood(const DepthImage& img, const CameraIntrinsics& K, int u, int v,
                         Neighborhood& out);

// Pixels with fewer present neighbors than this are left invalid by every
// neighborhood-based operation.
inline constexpr int kMinPresentNeighbors = 3;

}  // namespace dnorm
