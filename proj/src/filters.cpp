#include "dnorm/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dnorm {
namespace {

struct Tap {
  int du;
  int dv;
  double weight;
};

struct Stencil {
  std::array<Tap, 6> taps{};
  int count = 0;
};

// Horizontal-response stencils; the vertical one is the transpose.
Stencil horizontal_stencil(FilterKind kind) {
  Stencil s;
  auto add = [&s](int du, int dv, double w) { s.taps[static_cast<std::size_t>(s.count++)] = {du, dv, w}; };
  switch (kind) {
    case FilterKind::FD:
      add(1, 0, 0.5);
      add(-1, 0, -0.5);
      break;
    case FilterKind::Prewitt:
      for (int dv = -1; dv <= 1; ++dv) {
        add(1, dv, 1.0 / 6.0);
        add(-1, dv, -1.0 / 6.0);
      }
      break;
    case FilterKind::Sobel:
      for (int dv = -1; dv <= 1; ++dv) {
        const double w = (dv == 0 ? 2.0 : 1.0) / 8.0;
        add(1, dv, w);
        add(-1, dv, -w);
      }
      break;
    case FilterKind::Scharr:
      for (int dv = -1; dv <= 1; ++dv) {
        const double w = (dv == 0 ? 10.0 : 3.0) / 32.0;
        add(1, dv, w);
        add(-1, dv, -w);
      }
      break;
    case FilterKind::Roberts:
      break;
  }
  return s;
}

Stencil transpose(const Stencil& s) {
  Stencil t = s;
  for (int i = 0; i < t.count; ++i) std::swap(t.taps[static_cast<std::size_t>(i)].du, t.taps[static_cast<std::size_t>(i)].dv);
  return t;
}

bool tap_ok(const ScalarField& f, int u, int v) { return f.contains(u, v) && f.valid(u, v); }

bool apply(const ScalarField& f, const Stencil& s, int u, int v, double& out) {
  double acc = 0.0;
  for (int i = 0; i < s.count; ++i) {
    const Tap& t = s.taps[static_cast<std::size_t>(i)];
    const int tu = u + t.du;
    const int tv = v + t.dv;
    if (!tap_ok(f, tu, tv)) return false;
    acc += t.weight * f(tu, tv);
  }
  out = acc;
  return true;
}

bool one_sided(const ScalarField& f, int u, int v, int su, int sv, double& out) {
  if (tap_ok(f, u + su, v + sv)) {
    out = f(u + su, v + sv) - f(u, v);
    return true;
  }
  if (tap_ok(f, u - su, v - sv)) {
    out = f(u, v) - f(u - su, v - sv);
    return true;
  }
  return false;
}

// The two diagonal differences of the 2x2 block anchored at (u, v).
bool roberts(const ScalarField& f, int u, int v, double& du, double& dv) {
  if (!tap_ok(f, u + 1, v + 1) || !tap_ok(f, u + 1, v) || !tap_ok(f, u, v + 1)) return false;
  const double r1 = f(u + 1, v + 1) - f(u, v);
  const double r2 = f(u + 1, v) - f(u, v + 1);
  du = 0.5 * (r1 + r2);
  dv = 0.5 * (r1 - r2);
  return true;
}

}  // namespace

Gradient gradient(const ScalarField& field, GradientFilter filter) {
  const int w = field.width();
  const int h = field.height();
  Gradient g{ScalarField(w, h), ScalarField(w, h)};
  const Stencil hs = horizontal_stencil(filter.kind);
  const Stencil vs = transpose(hs);

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!field.valid(u, v)) continue;
      double du = 0.0;
      double dv = 0.0;
      bool have_u = false;
      bool have_v = false;
      if (filter.kind == FilterKind::Roberts) {
        have_u = have_v = roberts(field, u, v, du, dv);
      } else {
        have_u = apply(field, hs, u, v, du);
        have_v = apply(field, vs, u, v, dv);
      }
      if (!have_u) have_u = one_sided(field, u, v, 1, 0, du);
      if (!have_v) have_v = one_sided(field, u, v, 0, 1, dv);
      if (have_u) g.du.set(u, v, du);
      if (have_v) g.dv.set(u, v, dv);
    }
  }
  return g;
}

ScalarField second_derivative(const ScalarField& field, Axis axis) {
  const int w = field.width();
  const int h = field.height();
  ScalarField out(w, h);
  const int su = axis == Axis::U ? 1 : 0;
  const int sv = axis == Axis::V ? 1 : 0;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!field.valid(u, v) || !tap_ok(field, u + su, v + sv) || !tap_ok(field, u - su, v - sv)) continue;
      out.set(u, v, field(u + su, v + sv) - 2.0 * field(u, v) + field(u - su, v - sv));
    }
  }
  return out;
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample set");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double central_tendency(std::span<double> samples, CentralTendency tendency) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("central tendency of an empty sample set");
  switch (tendency.kind) {
    case TendencyKind::Mean:
      return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    case TendencyKind::Median: {
      const std::size_t mid = (n - 1) / 2;  // lower middle for even n
      std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(mid), samples.end());
      return samples[mid];
    }
    case TendencyKind::Trimean: {
      std::sort(samples.begin(), samples.end());
      const double q1 = interpolated_quantile(samples, 0.25);
      const double q2 = interpolated_quantile(samples, 0.50);
      const double q3 = interpolated_quantile(samples, 0.75);
      return (q1 + 2.0 * q2 + q3) / 4.0;
    }
    case TendencyKind::TrimmedMean: {
      if (!(tendency.trim >= 0.0 && tendency.trim < 0.5)) {
        throw std::invalid_argument("trim fraction must lie in [0, 0.5)");
      }
      std::sort(samples.begin(), samples.end());
      const auto k = static_cast<std::size_t>(std::floor(tendency.trim * static_cast<double>(n)));
      const auto first = samples.begin() + static_cast<std::ptrdiff_t>(k);
      const auto last = samples.end() - static_cast<std::ptrdiff_t>(k);
      return std::accumulate(first, last, 0.0) / static_cast<double>(n - 2 * k);
    }
  }
  throw std::logic_error("unknown central tendency");
}

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::FD: return "fd";
    case FilterKind::Roberts: return "roberts";
    case FilterKind::Prewitt: return "prewitt";
    case FilterKind::Sobel: return "sobel";
    case FilterKind::Scharr: return "scharr";
  }
  return "?";
}

std::string_view to_string(TendencyKind kind) {
  switch (kind) {
    case TendencyKind::Mean: return "mean";
    case TendencyKind::Median: return "median";
    case TendencyKind::Trimean: return "trimean";
    case TendencyKind::TrimmedMean: return "trimmean";
  }
  return "?";
}

FilterKind parse_filter(std::string_view name) {
  for (auto k : {FilterKind::FD, FilterKind::Roberts, FilterKind::Prewitt, FilterKind::Sobel, FilterKind::Scharr}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown gradient filter '" + std::string(name) + "'");
}

TendencyKind parse_tendency(std::string_view name) {
  for (auto k : {TendencyKind::Mean, TendencyKind::Median, TendencyKind::Trimean, TendencyKind::TrimmedMean}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown central tendency '" + std::string(name) + "'");
}

}  // namespace dnorm
