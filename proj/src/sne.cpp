#include "dnorm/sne.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dnorm {
namespace {

ScalarField inverse_depth(const DepthImage& img) {
  ScalarField inv(img.width(), img.height());
  const auto z = img.values();
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (img.valid_at(i)) inv.set_at(i, 1.0 / z[i]);
  }
  return inv;
}

bool finalize(const Vec3& raw, const Vec3& point, Vec3& out) {
  const double len = norm(raw);
  if (!(len > 0.0) || !std::isfinite(len)) return false;
  out = orient_towards_camera(raw / len, point);
  return true;
}

// Polar-angle aggregation over normalized per-neighbor normals. Neighbors
// below the depth-offset floor only contribute when the tangential
// components vanish, in which case (0, 0, 1) is the only consistent normal.
bool roadseg_direction(const Neighborhood& nb, double nx, double ny, Vec3& out) {
  const bool flat = nx == 0.0 && ny == 0.0;
  const double phi = flat ? 0.0 : std::atan2(ny, nx);
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  double tangential = 0.0;
  double axial = 0.0;
  int used = 0;
  for (int i = 0; i < kNeighborCount; ++i) {
    if (!nb.present[i]) continue;
    const Vec3& d = nb.deltas[i];
    Vec3 unit;
    if (std::abs(d.z) >= kDepthDeltaFloor) {
      const Vec3 raw{nx, ny, -(d.x * nx + d.y * ny) / d.z};
      const double len = norm(raw);
      if (!(len > 0.0) || !std::isfinite(len)) continue;
      unit = raw / len;
    } else if (flat) {
      unit = {0.0, 0.0, 1.0};
    } else {
      continue;
    }
    tangential += unit.x * cphi + unit.y * sphi;
    axial += unit.z;
    ++used;
  }
  if (used == 0 || axial == 0.0) return false;
  const double theta = std::atan(tangential / axial);
  out = {std::sin(theta) * cphi, std::sin(theta) * sphi, std::cos(theta)};
  return true;
}

enum class NzRule { Tendency, RoadSeg };

NormalMap gradient_filter_normals(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg,
                                  NzRule rule) {
  K.validate();
  const int w = img.width();
  const int h = img.height();
  const Gradient g = gradient(inverse_depth(img), cfg.filter);
  NormalMap out(w, h);
  Neighborhood nb;
  std::array<double, kNeighborCount> samples{};

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!img.valid(u, v) || !g.du.valid(u, v) || !g.dv.valid(u, v)) continue;
      gather_neighborhood(img, K, u, v, nb);
      if (nb.present_count() < kMinPresentNeighbors) continue;
      const double nx = K.fx * g.du(u, v);
      const double ny = K.fy * g.dv(u, v);

      Vec3 n;
      bool ok = false;
      if (rule == NzRule::Tendency) {
        std::size_t count = 0;
        for (int i = 0; i < kNeighborCount; ++i) {
          if (!nb.present[i]) continue;
          const Vec3& d = nb.deltas[i];
          if (std::abs(d.z) < kDepthDeltaFloor) continue;
          samples[count++] = (d.x * nx + d.y * ny) / d.z;
        }
        if (count > 0) {
          const double nz = -central_tendency(std::span<double>(samples.data(), count), cfg.tendency);
          ok = finalize({nx, ny, nz}, nb.center_point(), n);
        }
      }
      if (!ok) {
        Vec3 dir;
        ok = roadseg_direction(nb, nx, ny, dir) && finalize(dir, nb.center_point(), n);
      }
      if (ok) out.set(u, v, n);
    }
  }
  return out;
}

}  // namespace

NormalMap estimate_3f2n(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg) {
  return gradient_filter_normals(img, K, cfg, NzRule::Tendency);
}

NormalMap estimate_roadseg_nz(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg) {
  return gradient_filter_normals(img, K, cfg, NzRule::RoadSeg);
}

NormalMap estimate_d2nt(const DepthImage& img, const CameraIntrinsics& K, GradientFilter filter) {
  K.validate();
  const int w = img.width();
  const int h = img.height();
  const Gradient g = gradient(img.field(), filter);
  NormalMap out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!img.valid(u, v) || !g.du.valid(u, v) || !g.dv.valid(u, v)) continue;
      const double z = img.depth(u, v);
      const double zu = g.du(u, v);
      const double zv = g.dv(u, v);
      const Vec3 raw{K.fx * zu, K.fy * zv, -z - (u - K.u0) * zu - (v - K.v0) * zv};
      Vec3 n;
      if (finalize(raw, unproject(u, v, z, K), n)) out.set(u, v, n);
    }
  }
  return out;
}

SymmetricEigen3 symmetric_eigen3(const std::array<double, 9>& m) {
  double a[3][3];
  double vec[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) a[r][c] = m[static_cast<std::size_t>(r * 3 + c)];
  }
  double total = 0.0;
  for (double x : m) total += x * x;
  total = std::sqrt(total);

  SymmetricEigen3 result;
  constexpr int kMaxSweeps = 50;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double off = std::sqrt(2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]));
    if (off <= 1e-12 * total || off == 0.0) break;
    ++result.sweeps;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a[p][p] -= t * apq;
        a[q][q] += t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (int r = 0; r < 3; ++r) {
          if (r != p && r != q) {
            const double arp = a[r][p];
            const double arq = a[r][q];
            a[r][p] = a[p][r] = c * arp - s * arq;
            a[r][q] = a[q][r] = s * arp + c * arq;
          }
          const double vrp = vec[r][p];
          const double vrq = vec[r][q];
          vec[r][p] = c * vrp - s * vrq;
          vec[r][q] = s * vrp + c * vrq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] < a[j][j]; });
  for (std::size_t k = 0; k < 3; ++k) {
    const int c = order[k];
    result.values[k] = a[c][c];
    result.vectors[k] = {vec[0][c], vec[1][c], vec[2][c]};
  }
  return result;
}

NormalMap estimate_planesvd(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg) {
  K.validate();
  if (cfg.window_radius < 1) throw std::invalid_argument("PlaneSVD window radius must be at least 1");
  const int w = img.width();
  const int h = img.height();
  const int r = cfg.window_radius;
  NormalMap out(w, h);
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!img.valid(u, v)) continue;
      pts.clear();
      for (int dv = -r; dv <= r; ++dv) {
        for (int du = -r; du <= r; ++du) {
          const int pu = u + du;
          const int pv = v + dv;
          if (img.contains(pu, pv) && img.valid(pu, pv)) pts.push_back(unproject(pu, pv, img.depth(pu, pv), K));
        }
      }
      if (static_cast<int>(pts.size()) - 1 < kMinPresentNeighbors) continue;

      Vec3 mean{};
      for (const auto& p : pts) mean = mean + p;
      mean = mean / static_cast<double>(pts.size());
      std::array<double, 9> cov{};
      for (const auto& p : pts) {
        const Vec3 d = p - mean;
        const double c[3] = {d.x, d.y, d.z};
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) cov[static_cast<std::size_t>(i * 3 + j)] += c[i] * c[j];
        }
      }
      const SymmetricEigen3 eig = symmetric_eigen3(cov);
      // Collinear or coincident points leave the plane undetermined.
      if (!(eig.values[2] > 0.0) || eig.values[1] <= 1e-12 * eig.values[2]) continue;
      Vec3 n;
      if (finalize(eig.vectors[0], unproject(u, v, img.depth(u, v), K), n)) out.set(u, v, n);
    }
  }
  return out;
}

NormalMap estimate_normals(const DepthImage& img, const CameraIntrinsics& K, const SneConfig& cfg) {
  switch (cfg.method) {
    case SneMethod::ThreeF2N: return estimate_3f2n(img, K, cfg);
    case SneMethod::RoadSeg: return estimate_roadseg_nz(img, K, cfg);
    case SneMethod::D2NT: return estimate_d2nt(img, K, cfg.filter);
    case SneMethod::PlaneSVD: return estimate_planesvd(img, K, cfg);
  }
  throw std::logic_error("unknown estimator");
}

std::string_view to_string(SneMethod method) {
  switch (method) {
    case SneMethod::ThreeF2N: return "3f2n";
    case SneMethod::RoadSeg: return "roadseg";
    case SneMethod::D2NT: return "d2nt";
    case SneMethod::PlaneSVD: return "planesvd";
  }
  return "?";
}

}  // namespace dnorm
