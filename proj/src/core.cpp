#include "dnorm/core.hpp"

#include <algorithm>
#include <string>

namespace dnorm {

double angle_between(const Vec3& a, const Vec3& b) {
  // atan2 form: exact zero for parallel inputs and no domain error from rounding.
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !std::isfinite(fx)) throw std::invalid_argument("fx must be positive and finite");
  if (!(fy > 0.0) || !std::isfinite(fy)) throw std::invalid_argument("fy must be positive and finite");
  if (!std::isfinite(u0) || !std::isfinite(v0)) {
    throw std::invalid_argument("principal point must be finite");
  }
}

DepthImage DepthImage::from_values(int width, int height, std::span<const double> z) {
  DepthImage img(width, height);
  if (z.size() != img.size()) {
    throw std::invalid_argument("depth array has " + std::to_string(z.size()) +
                                " entries, expected " + std::to_string(img.size()));
  }
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) img.set_depth(u, v, z[img.index(u, v)]);
  }
  return img;
}

bool DepthImage::set_depth(int u, int v, double z) {
  if (std::isfinite(z) && z > 0.0) {
    z_.set(u, v, z);
    return true;
  }
  z_(u, v) = z;
  z_.invalidate(u, v);
  return false;
}

Vec3 unproject(double u, double v, double z, const CameraIntrinsics& K) {
  if (!std::isfinite(z) || !(z > 0.0)) throw std::invalid_argument("unproject: depth must be positive");
  return {(u - K.u0) * z / K.fx, (v - K.v0) * z / K.fy, z};
}

Vec3 project(const Vec3& p, const CameraIntrinsics& K) {
  if (!(p.z > 0.0)) throw std::invalid_argument("project: point must lie in front of the camera");
  return {K.fx * p.x / p.z + K.u0, K.fy * p.y / p.z + K.v0, p.z};
}

Vec3 orient_towards_camera(const Vec3& n, const Vec3& point) {
  return dot(n, point) > 0.0 ? -n : n;
}

int Neighborhood::present_count() const {
  return static_cast<int>(std::count(present.begin(), present.end(), true));
}

void gather_neighborhood(const DepthImage& img, const CameraIntrinsics& K, int u, int v,
                         Neighborhood& out) {
  out.u = u;
  out.v = v;
  const double zq = img.depth(u, v);
  out.depths[0] = zq;
  const Vec3 q{(u - K.u0) * zq / K.fx, (v - K.v0) * zq / K.fy, zq};
  out.cam_points[0] = q;
  for (int i = 0; i < kNeighborCount; ++i) {
    const int nu = u + kNeighborOffsets[i][0];
    const int nv = v + kNeighborOffsets[i][1];
    const std::size_t slot = static_cast<std::size_t>(i) + 1;
    if (!img.contains(nu, nv) || !img.valid(nu, nv)) {
      out.present[i] = false;
      out.depths[slot] = 0.0;
      out.cam_points[slot] = {};
      out.deltas[i] = {};
      continue;
    }
    const double z = img.depth(nu, nv);
    const Vec3 p{(nu - K.u0) * z / K.fx, (nv - K.v0) * z / K.fy, z};
    out.present[i] = true;
    out.depths[slot] = z;
    out.cam_points[slot] = p;
    out.deltas[i] = p - q;
  }
}

Neighborhood neighborhood(const DepthImage& img, const CameraIntrinsics& K, int u, int v) {
  K.validate();
  if (!img.contains(u, v)) throw std::invalid_argument("neighborhood: center outside the image");
  if (!img.valid(u, v)) throw std::invalid_argument("neighborhood: center pixel has no valid depth");
  Neighborhood nb;
  gather_neighborhood(img, K, u, v, nb);
  return nb;
}

}  // namespace dnorm
