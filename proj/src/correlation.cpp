#include "dnorm/correlation.hpp"

#include <cmath>

namespace dnorm {
namespace {

// Intrinsics are irrelevant to depth ordering; any valid camera works for
// gathering the neighborhood.
constexpr CameraIntrinsics kUnitCamera{1.0, 1.0, 0.0, 0.0};

double abs_correlation(const double* x, const double* y, int n) {
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 1.0;
  const double r = std::abs(sxy) / std::sqrt(sxx * syy);
  return r > 1.0 ? 1.0 : r;
}

template <typename PerPixel>
ScalarField neighborhood_field(const DepthImage& img, PerPixel&& fn) {
  ScalarField out(img.width(), img.height());
  Neighborhood nb;
  for (int v = 0; v < img.height(); ++v) {
    for (int u = 0; u < img.width(); ++u) {
      if (!img.valid(u, v)) continue;
      gather_neighborhood(img, kUnitCamera, u, v, nb);
      if (nb.present_count() < kMinPresentNeighbors) continue;
      out.set(u, v, fn(nb));
    }
  }
  return out;
}

}  // namespace

KendallCounts kendall_counts(const Neighborhood& nb) {
  KendallCounts c;
  const double zq = nb.center_depth();
  for (int i = 0; i < kNeighborCount; ++i) {
    if (!nb.present[i]) continue;
    const double zp = nb.neighbor_depth(i);
    if (zq < zp) {
      ++c.concordant;
    } else if (zq > zp) {
      ++c.discordant;
    } else {
      ++c.ties;
    }
  }
  return c;
}

double kendall_tau(const KendallCounts& c) {
  const int decided = c.concordant + c.discordant;
  if (decided == 0) return 1.0;
  return std::abs(static_cast<double>(c.concordant - c.discordant)) / decided;
}

ScalarField kendall_field(const DepthImage& img) {
  return neighborhood_field(img, [](const Neighborhood& nb) { return kendall_tau(kendall_counts(nb)); });
}

SequencePair sequence_pair(const Neighborhood& nb) {
  SequencePair s;
  s.psi_plus[0] = nb.center_depth();
  for (int i = 0; i < kNeighborCount; ++i) {
    if (!nb.present[i]) continue;
    s.psi[static_cast<std::size_t>(s.length)] = nb.neighbor_depth(i);
    s.psi_plus[static_cast<std::size_t>(s.length) + 1] = nb.neighbor_depth(i);
    ++s.length;
  }
  return s;
}

double pearson_epsilon(const SequencePair& s, PearsonPairing pairing) {
  const int n = s.length;
  if (n < 1) return 1.0;
  switch (pairing) {
    case PearsonPairing::Lag1:
      return abs_correlation(s.psi_plus.data(), s.psi.data(), n);
    case PearsonPairing::MeanPadded: {
      std::array<double, kNeighborCount + 1> padded{};
      double mean = 0.0;
      for (int i = 0; i < n; ++i) mean += s.psi[static_cast<std::size_t>(i)];
      padded[0] = mean / n;
      for (int i = 0; i < n; ++i) padded[static_cast<std::size_t>(i) + 1] = s.psi[static_cast<std::size_t>(i)];
      return abs_correlation(padded.data(), s.psi_plus.data(), n + 1);
    }
  }
  return 1.0;
}

ScalarField pearson_field(const DepthImage& img, PearsonPairing pairing) {
  return neighborhood_field(img,
                            [pairing](const Neighborhood& nb) { return pearson_epsilon(sequence_pair(nb), pairing); });
}

std::string_view to_string(PearsonPairing pairing) {
  return pairing == PearsonPairing::Lag1 ? "lag1" : "mean-padded";
}

}  // namespace dnorm
