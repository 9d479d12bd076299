#include "dnorm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dnorm {
namespace {

bool selected(const ScalarField* mask, std::size_t i) {
  return mask == nullptr || (mask->valid_at(i) && mask->values()[i] != 0.0);
}

}  // namespace

ScalarField angular_error_map(const NormalMap& est, const NormalMap& gt, const ScalarField* mask) {
  if (!est.same_shape(gt) || (mask && !est.same_shape(*mask))) {
    throw std::invalid_argument("angular_error_map: dimension mismatch");
  }
  ScalarField out(est.width(), est.height());
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (!est.valid_at(i) || !gt.valid_at(i) || !selected(mask, i)) continue;
    const Vec3& a = est.values()[i];
    const Vec3& b = gt.values()[i];
    if (!(norm(a) > 0.0) || !(norm(b) > 0.0)) continue;
    out.set_at(i, angle_between(a, b) * 180.0 / std::numbers::pi);
  }
  return out;
}

double mean_angular_error(const ScalarField& error_map, const ScalarField* mask) {
  if (mask && !error_map.same_shape(*mask)) throw std::invalid_argument("mean_angular_error: dimension mismatch");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < error_map.size(); ++i) {
    if (!error_map.valid_at(i) || !selected(mask, i)) continue;
    sum += error_map.values()[i];
    ++n;
  }
  if (n == 0) throw std::invalid_argument("mean_angular_error: no evaluated pixels");
  return sum / static_cast<double>(n);
}

RegionBreakdown region_breakdown(const ScalarField& error_map, const ScalarField& band_mask) {
  if (!error_map.same_shape(band_mask)) throw std::invalid_argument("region_breakdown: dimension mismatch");
  double band_sum = 0.0, interior_sum = 0.0;
  RegionBreakdown r;
  for (std::size_t i = 0; i < error_map.size(); ++i) {
    if (!error_map.valid_at(i)) continue;
    if (band_mask.valid_at(i) && band_mask.values()[i] != 0.0) {
      band_sum += error_map.values()[i];
      ++r.band_count;
    } else {
      interior_sum += error_map.values()[i];
      ++r.interior_count;
    }
  }
  if (r.band_count) r.band = band_sum / static_cast<double>(r.band_count);
  if (r.interior_count) r.interior = interior_sum / static_cast<double>(r.interior_count);
  return r;
}

}  // namespace dnorm
