#include "dnorm/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dnorm/filters.hpp"

namespace dnorm {
namespace {

constexpr double kHalfSqrt2 = 0.70710678118654752440;

// z^3 times the second difference of inverse depth. Differences at the
// level of rounding noise are snapped to zero so planes stay exactly flat.
ScalarField inverse_depth_bend(const DepthImage& img, const ScalarField& inv, Axis axis) {
  const int w = img.width();
  const int h = img.height();
  const int su = axis == Axis::U ? 1 : 0;
  const int sv = axis == Axis::V ? 1 : 0;
  constexpr double kNoise = 32.0 * std::numeric_limits<double>::epsilon();
  ScalarField out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!inv.valid(u, v)) continue;
      const int au = u - su, av = v - sv, bu = u + su, bv = v + sv;
      if (!inv.contains(au, av) || !inv.contains(bu, bv) || !inv.valid(au, av) || !inv.valid(bu, bv)) continue;
      const double a = inv(au, av);
      const double b = inv(u, v);
      const double c = inv(bu, bv);
      double d2 = a - 2.0 * b + c;
      if (std::abs(d2) <= kNoise * std::max({std::abs(a), std::abs(b), std::abs(c)})) d2 = 0.0;
      const double z = img.depth(u, v);
      out.set(u, v, z * z * z * d2);
    }
  }
  return out;
}

double directional(double second, double first) {
  return std::abs(second) / std::pow(1.0 + first * first, 1.5);
}

}  // namespace

DerivativeBundle derivative_bundle(const DepthImage& img, const CameraIntrinsics& K) {
  K.validate();
  const int w = img.width();
  const int h = img.height();
  DerivativeBundle b;
  b.z = img.field();

  const Gradient raw = gradient(img.field(), {FilterKind::FD});
  b.du = raw.du;
  b.dv = raw.dv;
  b.euu = second_derivative(img.field(), Axis::U);
  b.evv = second_derivative(img.field(), Axis::V);

  ScalarField inv(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (img.valid_at(i)) inv.set_at(i, 1.0 / img.values()[i]);
  }
  const Gradient ginv = gradient(inv, {FilterKind::FD});
  b.slope_u = ScalarField(w, h);
  b.slope_v = ScalarField(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double z = img.values()[i];
    if (ginv.du.valid_at(i)) b.slope_u.set_at(i, -z * z * ginv.du.values()[i]);
    if (ginv.dv.valid_at(i)) b.slope_v.set_at(i, -z * z * ginv.dv.values()[i]);
  }
  b.bend_u = inverse_depth_bend(img, inv, Axis::U);
  b.bend_v = inverse_depth_bend(img, inv, Axis::V);

  for (ScalarField* f : {&b.cx, &b.cy, &b.cl, &b.ct, &b.cxx, &b.cyy, &b.cll, &b.ctt, &b.eu, &b.ev, &b.alpha0,
                         &b.alpha1, &b.beta0, &b.beta1}) {
    *f = ScalarField(w, h);
  }

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!img.valid(u, v)) continue;
      const double z = img.depth(u, v);
      const double ru = u - K.u0;
      const double rv = v - K.v0;

      bool have_x = false, have_y = false, have_xx = false, have_yy = false;
      double cx = 0, cy = 0, cxx = 0, cyy = 0;
      if (b.slope_u.valid(u, v)) {
        const double s = b.slope_u(u, v);
        const double a = ru * s + z;  // fx * dx/du; zero for a grazing ray
        if (std::abs(a) > 1e-12 * z) {
          cx = K.fx * s / a;
          have_x = true;
          b.cx.set(u, v, cx);
          if (b.bend_u.valid(u, v)) {
            cxx = -K.fx * K.fx * b.bend_u(u, v) / (a * a * a);
            have_xx = true;
            b.cxx.set(u, v, cxx);
          }
        }
        if (s != 0.0) {
          const double e = 1.0 / s;
          b.eu.set(u, v, e);
          b.alpha1.set(u, v, ru + z * e);
          if (b.bend_u.valid(u, v)) b.alpha0.set(u, v, e * e * e * b.bend_u(u, v));
        }
      }
      if (b.slope_v.valid(u, v)) {
        const double s = b.slope_v(u, v);
        const double a = rv * s + z;
        if (std::abs(a) > 1e-12 * z) {
          cy = K.fy * s / a;
          have_y = true;
          b.cy.set(u, v, cy);
          if (b.bend_v.valid(u, v)) {
            cyy = -K.fy * K.fy * b.bend_v(u, v) / (a * a * a);
            have_yy = true;
            b.cyy.set(u, v, cyy);
          }
        }
        if (s != 0.0) {
          const double e = 1.0 / s;
          b.ev.set(u, v, e);
          b.beta1.set(u, v, rv + z * e);
          if (b.bend_v.valid(u, v)) b.beta0.set(u, v, e * e * e * b.bend_v(u, v));
        }
      }
      if (have_x && have_y) {
        b.cl.set(u, v, kHalfSqrt2 * (cx + cy));
        b.ct.set(u, v, kHalfSqrt2 * (cx - cy));
      }
      if (have_xx && have_yy) {
        b.cll.set(u, v, kHalfSqrt2 * (cxx + cyy));
        b.ctt.set(u, v, kHalfSqrt2 * (cxx - cyy));
      }
    }
  }
  return b;
}

DirectionalCurvatures directional_curvatures(const DerivativeBundle& b) {
  const int w = b.cx.width();
  const int h = b.cx.height();
  DirectionalCurvatures k{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h), ScalarField(w, h)};
  for (std::size_t i = 0; i < b.cx.size(); ++i) {
    if (b.cxx.valid_at(i)) k.ku.set_at(i, directional(b.cxx.values()[i], b.cx.values()[i]));
    if (b.cyy.valid_at(i)) k.kv.set_at(i, directional(b.cyy.values()[i], b.cy.values()[i]));
    if (b.cll.valid_at(i)) k.kg.set_at(i, directional(b.cll.values()[i], b.cl.values()[i]));
    if (b.ctt.valid_at(i)) k.kb.set_at(i, directional(b.ctt.values()[i], b.ct.values()[i]));
  }
  return k;
}

FundamentalForms fundamental_forms(const DerivativeBundle& b) {
  const int w = b.cx.width();
  const int h = b.cx.height();
  FundamentalForms f{ScalarField(w, h), ScalarField(w, h), ScalarField(w, h),
                     ScalarField(w, h), ScalarField(w, h), ScalarField(w, h)};
  for (std::size_t i = 0; i < b.cx.size(); ++i) {
    if (b.cx.valid_at(i) && b.cy.valid_at(i)) {
      const double cx = b.cx.values()[i];
      const double cy = b.cy.values()[i];
      f.E.set_at(i, cx * cx);
      f.F.set_at(i, cx * cy);
      f.G.set_at(i, cy * cy);
    }
    if (b.cll.valid_at(i)) {
      const double cxx = b.cxx.values()[i];
      const double cyy = b.cyy.values()[i];
      f.L.set_at(i, cxx * cyy);
      f.M.set_at(i, cxx * b.cll.values()[i]);
      f.N.set_at(i, b.ctt.values()[i] * cyy);
    }
  }
  return f;
}

CurvatureField curvature_field(const DerivativeBundle& b, CurvatureKind kind) {
  const int w = b.cx.width();
  const int h = b.cx.height();
  CurvatureField out{ScalarField(w, h), std::vector<std::uint8_t>(b.cx.size(), 0)};

  if (kind == CurvatureKind::Mean || kind == CurvatureKind::Max) {
    const DirectionalCurvatures k = directional_curvatures(b);
    // Which directional field each neighbor contributes, in neighbor order.
    const std::array<const ScalarField*, kNeighborCount> along = {&k.kg, &k.kv, &k.kb, &k.ku,
                                                                  &k.ku, &k.kb, &k.kv, &k.kg};
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!b.z.valid(u, v)) continue;
        int count = 0;
        double sum = 0.0;
        double peak = 0.0;
        for (int i = 0; i < kNeighborCount; ++i) {
          const int nu = u + kNeighborOffsets[i][0];
          const int nv = v + kNeighborOffsets[i][1];
          const ScalarField& f = *along[static_cast<std::size_t>(i)];
          if (!f.contains(nu, nv) || !f.valid(nu, nv)) continue;
          const double kv = f(nu, nv);
          sum += kv;
          peak = std::max(peak, kv);
          ++count;
        }
        if (count < kMinPresentNeighbors) continue;
        out.value.set(u, v, kind == CurvatureKind::Mean ? sum / count : peak);
      }
    }
    return out;
  }

  const FundamentalForms f = fundamental_forms(b);
  for (std::size_t i = 0; i < b.cx.size(); ++i) {
    if (!b.z.valid_at(i) || !f.E.valid_at(i) || !f.L.valid_at(i)) continue;
    const double E = f.E.values()[i], F = f.F.values()[i], G = f.G.values()[i];
    const double L = f.L.values()[i], M = f.M.values()[i], N = f.N.values()[i];
    double num = 0.0;
    double den = 0.0;
    bool degenerate = false;
    if (kind == CurvatureKind::Normal) {
      // e_v^2 : e_u e_v : e_u^2 scaled by (d_u d_v)^2 becomes d_u^2 : d_u d_v : d_v^2.
      const double su = b.slope_u.values()[i];
      const double sv = b.slope_v.values()[i];
      num = L * su * su + 2.0 * M * su * sv + N * sv * sv;
      den = E * su * su + 2.0 * F * su * sv + G * sv * sv;
      degenerate = std::abs(den) < 1e-12;
    } else {
      num = L * N - M * M;
      den = E * G - F * F;
      // E G - F^2 vanishes identically for these coefficients; whatever is
      // left is rounding, so the threshold scales with E G.
      degenerate = std::abs(den) < 1e-12 * std::max(1.0, std::abs(E * G));
    }
    if (degenerate) {
      out.value.set_at(i, 0.0);
      out.degenerate[i] = 1;
    } else {
      out.value.set_at(i, std::abs(num / den));
    }
  }
  return out;
}

CurvatureField curvature_field(const DepthImage& img, const CameraIntrinsics& K, CurvatureKind kind) {
  return curvature_field(derivative_bundle(img, K), kind);
}

std::string_view to_string(CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::Mean: return "mean";
    case CurvatureKind::Max: return "max";
    case CurvatureKind::Normal: return "normal";
    case CurvatureKind::Gauss: return "gauss";
  }
  return "?";
}

CurvatureKind parse_curvature(std::string_view name) {
  for (auto k : {CurvatureKind::Mean, CurvatureKind::Max, CurvatureKind::Normal, CurvatureKind::Gauss}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown curvature kind '" + std::string(name) + "'");
}

}  // namespace dnorm
