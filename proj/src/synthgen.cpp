#include "dnorm/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dnorm {
namespace {

Vec3 normalized(const Vec3& n, const char* what) {
  const double len = norm(n);
  if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument(std::string(what) + " must be a non-zero vector");
  return n / len;
}

Vec3 ray_direction(const CameraIntrinsics& K, double u, double v) {
  return {(u - K.u0) / K.fx, (v - K.v0) / K.fy, 1.0};
}

std::optional<SurfaceHit> hit_plane(const Vec3& n, double offset, const Vec3& d, int label) {
  const double nd = dot(n, d);
  if (nd == 0.0) return std::nullopt;
  const double t = -offset / nd;
  if (!(t > 0.0)) return std::nullopt;
  return SurfaceHit{t, orient_towards_camera(n, d * t), label};
}

std::optional<SurfaceHit> hit_step(const StepParams& s, double u) {
  const bool near = u < s.split_column;
  return SurfaceHit{near ? s.near_depth : s.far_depth, {0.0, 0.0, -1.0}, near ? 0 : 1};
}

std::optional<SurfaceHit> hit_wedge(const WedgeParams& w, const Vec3& d) {
  const Vec3 ridge{w.ridge_x, 0.0, w.ridge_z};
  std::optional<SurfaceHit> best;
  const std::array<Vec3, 2> normals = {normalized(w.left_normal, "wedge left normal"),
                                       normalized(w.right_normal, "wedge right normal")};
  for (int side = 0; side < 2; ++side) {
    const Vec3& n = normals[static_cast<std::size_t>(side)];
    auto hit = hit_plane(n, -dot(n, ridge), d, side);
    if (!hit) continue;
    const double x = d.x * hit->depth;
    const bool on_half = side == 0 ? x <= w.ridge_x : x >= w.ridge_x;
    if (!on_half) continue;
    if (!best || hit->depth < best->depth) best = hit;
  }
  return best;
}

std::optional<SurfaceHit> hit_sphere(const SphereParams& s, const Vec3& d) {
  const double a = dot(d, d);
  const double b = dot(d, s.center);
  const double c = dot(s.center, s.center) - s.radius * s.radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  double t = (b - root) / a;
  if (!(t > 0.0)) t = (b + root) / a;
  if (!(t > 0.0)) return std::nullopt;
  const Vec3 p = d * t;
  return SurfaceHit{t, orient_towards_camera((p - s.center) / s.radius, p), 0};
}

// Rows are the wall axes e_i expressed in the camera frame: the rotation
// that carries (1,1,1)/sqrt(3) onto +z applied to the unit axes.
std::array<Vec3, 3> corner_axes() {
  const Vec3 from = Vec3{1.0, 1.0, 1.0} / std::sqrt(3.0);
  const Vec3 to{0.0, 0.0, 1.0};
  const Vec3 axis = cross(from, to);
  const double s = norm(axis);
  const double c = dot(from, to);
  const Vec3 k = axis / s;
  auto rotate = [&](const Vec3& x) {
    return x * c + cross(k, x) * s + k * (dot(k, x) * (1.0 - c));
  };
  return {rotate({1.0, 0.0, 0.0}), rotate({0.0, 1.0, 0.0}), rotate({0.0, 0.0, 1.0})};
}

std::optional<SurfaceHit> hit_corner(const CornerParams& cp, const Vec3& d) {
  static const std::array<Vec3, 3> axes = corner_axes();
  const Vec3 apex{0.0, 0.0, cp.distance};
  std::optional<SurfaceHit> best;
  for (int i = 0; i < 3; ++i) {
    const Vec3& e = axes[static_cast<std::size_t>(i)];
    const double ed = dot(e, d);
    if (ed <= 0.0) continue;  // the ray never leaves the room through this wall
    const double t = dot(e, apex) / ed;
    if (!best || t < best->depth) best = SurfaceHit{t, -e, i};
  }
  return best;
}

std::optional<SurfaceHit> hit_sinusoid(const SinusoidParams& s, const Vec3& d) {
  const double A = s.amplitude;
  const double w = s.frequency;
  auto f = [&](double t) { return t - s.base_depth - A * std::sin(w * t * d.x) * std::cos(w * t * d.y); };
  auto df = [&](double t) {
    const double sx = std::sin(w * t * d.x), cx = std::cos(w * t * d.x);
    const double sy = std::sin(w * t * d.y), cy = std::cos(w * t * d.y);
    return 1.0 - A * w * (d.x * cx * cy - d.y * sx * sy);
  };
  // f is increasing on the bracket (validated slope bound), so the root is
  // unique; Newton steps that leave the bracket fall back to bisection.
  double lo = s.base_depth - std::abs(A);
  double hi = s.base_depth + std::abs(A);
  double t = s.base_depth;
  for (int it = 0; it < 100; ++it) {
    const double ft = f(t);
    if (ft == 0.0) break;
    if (ft < 0.0) lo = t; else hi = t;
    double next = t - ft / df(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * t) {
      t = next;
      break;
    }
    t = next;
  }
  if (!(t > 0.0)) return std::nullopt;
  const double x = t * d.x, y = t * d.y;
  const Vec3 grad{-A * w * std::cos(w * x) * std::cos(w * y), A * w * std::sin(w * x) * std::sin(w * y), 1.0};
  return SurfaceHit{t, orient_towards_camera(grad / norm(grad), d * t), 0};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

}  // namespace

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("scene: width and height must be positive");
  K.validate();
  if (!(max_depth > 0.0)) throw std::invalid_argument("scene: max_depth must be positive");
  if (band_radius < 0) throw std::invalid_argument("scene: band_radius must be >= 0");
  switch (kind) {
    case SceneKind::Plane:
      normalized(plane.normal, "plane normal");
      if (!std::isfinite(plane.offset)) throw std::invalid_argument("scene: plane offset must be finite");
      break;
    case SceneKind::Step:
      if (!(step.near_depth > 0.0) || !(step.far_depth > 0.0)) {
        throw std::invalid_argument("scene: step depths must be positive");
      }
      break;
    case SceneKind::Wedge:
      normalized(wedge.left_normal, "wedge left normal");
      normalized(wedge.right_normal, "wedge right normal");
      if (wedge.left_normal.y != 0.0 || wedge.right_normal.y != 0.0) {
        throw std::invalid_argument("scene: wedge normals must have zero y component");
      }
      if (!(wedge.ridge_z > 0.0)) throw std::invalid_argument("scene: wedge ridge_z must be positive");
      break;
    case SceneKind::Sphere:
      if (!(sphere.radius > 0.0)) throw std::invalid_argument("scene: sphere radius must be positive");
      if (norm(sphere.center) <= sphere.radius) throw std::invalid_argument("scene: camera lies inside the sphere");
      break;
    case SceneKind::Corner:
      if (!(corner.distance > 0.0)) throw std::invalid_argument("scene: corner distance must be positive");
      break;
    case SceneKind::Sinusoid: {
      if (!(sinusoid.base_depth > std::abs(sinusoid.amplitude))) {
        throw std::invalid_argument("scene: sinusoid base_depth must exceed |amplitude|");
      }
      if (!(sinusoid.frequency >= 0.0)) throw std::invalid_argument("scene: sinusoid frequency must be >= 0");
      const double dx = std::max(std::abs(-K.u0), std::abs(width - 1 - K.u0)) / K.fx;
      const double dy = std::max(std::abs(-K.v0), std::abs(height - 1 - K.v0)) / K.fy;
      if (std::abs(sinusoid.amplitude) * sinusoid.frequency * (dx + dy) >= 1.0) {
        throw std::invalid_argument("scene: sinusoid too steep for a single visible layer");
      }
      break;
    }
  }
}

std::optional<SurfaceHit> cast_ray(const SceneSpec& spec, double u, double v) {
  const Vec3 d = ray_direction(spec.K, u, v);
  std::optional<SurfaceHit> hit;
  switch (spec.kind) {
    case SceneKind::Plane: hit = hit_plane(normalized(spec.plane.normal, "plane normal"), spec.plane.offset, d, 0); break;
    case SceneKind::Step: hit = hit_step(spec.step, u); break;
    case SceneKind::Wedge: hit = hit_wedge(spec.wedge, d); break;
    case SceneKind::Sphere: hit = hit_sphere(spec.sphere, d); break;
    case SceneKind::Corner: hit = hit_corner(spec.corner, d); break;
    case SceneKind::Sinusoid: hit = hit_sinusoid(spec.sinusoid, d); break;
  }
  if (hit && !(hit->depth <= spec.max_depth)) return std::nullopt;
  return hit;
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width;
  const int h = spec.height;
  Scene s{DepthImage(w, h), NormalMap(w, h), ScalarField(w, h, 0.0), std::vector<int>(static_cast<std::size_t>(w) * h, -1)};
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const auto hit = cast_ray(spec, u, v);
      if (!hit || !s.depth.set_depth(u, v, hit->depth)) continue;
      s.normals.set(u, v, hit->normal);
      s.labels[s.depth.index(u, v)] = hit->label;
    }
  }

  std::vector<std::uint8_t> seam(s.labels.size(), 0);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      // Misses count as their own label, so silhouettes are seams too.
      const int l = s.labels[s.depth.index(u, v)];
      const bool left = u > 0 && s.labels[s.depth.index(u - 1, v)] != l;
      const bool up = v > 0 && s.labels[s.depth.index(u, v - 1)] != l;
      if (left || up) seam[s.depth.index(u, v)] = 1;
    }
  }
  const int r = spec.band_radius;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double inside = 0.0;
      for (int dv = -r; dv <= r && inside == 0.0; ++dv) {
        for (int du = -r; du <= r; ++du) {
          const int nu = u + du, nv = v + dv;
          if (nu >= 0 && nv >= 0 && nu < w && nv < h && seam[s.depth.index(nu, nv)]) {
            inside = 1.0;
            break;
          }
        }
      }
      s.band.set(u, v, inside);
    }
  }
  return s;
}

double gaussian_deviate(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t key = splitmix64(seed);
  const double u1 = unit_open(splitmix64(key ^ (2 * counter)));
  const double u2 = unit_open(splitmix64(key ^ (2 * counter + 1)));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DepthImage add_gaussian_noise(const DepthImage& img, const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw std::invalid_argument("noise sigma must be finite and >= 0");
  }
  if (noise.sigma == 0.0) return img;
  DepthImage out(img.width(), img.height());
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      if (!img.valid(u, v)) continue;
      const double z = img.depth(u, v);
      const double scale = noise.mode == NoiseMode::Absolute ? noise.sigma : noise.sigma * z;
      out.set_depth(u, v, z + scale * gaussian_deviate(noise.seed, img.index(u, v)));
    }
  }
  return out;
}

SceneSpec tilted_plane_scene(double slant_deg, double depth, int width, int height, const CameraIntrinsics& K) {
  const double a = slant_deg * std::numbers::pi / 180.0;
  SceneSpec s;
  s.kind = SceneKind::Plane;
  s.width = width;
  s.height = height;
  s.K = K;
  s.plane.normal = {std::sin(a), 0.0, -std::cos(a)};
  s.plane.offset = depth * std::cos(a);  // passes through (0, 0, depth)
  return s;
}

std::string_view to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::Plane: return "plane";
    case SceneKind::Step: return "step";
    case SceneKind::Wedge: return "wedge";
    case SceneKind::Sphere: return "sphere";
    case SceneKind::Corner: return "corner";
    case SceneKind::Sinusoid: return "sinusoid";
  }
  return "?";
}

SceneKind parse_scene_kind(std::string_view name) {
  for (auto k : {SceneKind::Plane, SceneKind::Step, SceneKind::Wedge, SceneKind::Sphere, SceneKind::Corner,
                 SceneKind::Sinusoid}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown scene kind '" + std::string(name) + "'");
}

std::string_view to_string(NoiseMode mode) { return mode == NoiseMode::Absolute ? "absolute" : "relative"; }

NoiseMode parse_noise_mode(std::string_view name) {
  if (name == "absolute") return NoiseMode::Absolute;
  if (name == "relative") return NoiseMode::Relative;
  throw std::invalid_argument("unknown noise mode '" + std::string(name) + "'");
}

}  // namespace dnorm
