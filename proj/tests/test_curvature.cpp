#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dnorm/curvature.hpp"
#include "dnorm/synthgen.hpp"
#include "test_support.hpp"

namespace dnorm {
namespace {

using test::kHalfCamera;
using test::kHalfHeight;
using test::kHalfWidth;

constexpr std::array kKinds{CurvatureKind::Mean, CurvatureKind::Max, CurvatureKind::Normal, CurvatureKind::Gauss};

Scene plane(double slant_deg) {
  return generate_scene(tilted_plane_scene(slant_deg, 2.0, kHalfWidth, kHalfHeight, kHalfCamera));
}

SceneSpec sphere_spec() {
  SceneSpec spec;
  spec.kind = SceneKind::Sphere;
  spec.width = kHalfWidth;
  spec.height = kHalfHeight;
  spec.K = kHalfCamera;
  return spec;
}

TEST(Curvature, FrontoParallelIsFlat) {
  const Scene s = plane(0.0);
  const DerivativeBundle b = derivative_bundle(s.depth, kHalfCamera);
  EXPECT_EQ(b.cx(50, 50), 0.0);
  EXPECT_EQ(b.cy(50, 50), 0.0);
  EXPECT_EQ(b.euu(50, 50), 0.0);
  // e_u = 1 / (dz/du) has no value on a flat patch.
  EXPECT_FALSE(b.eu.valid(50, 50));
  for (auto kind : kKinds) {
    const CurvatureField c = curvature_field(b, kind);
    EXPECT_EQ(c.value(50, 50), 0.0) << to_string(kind);
  }
  EXPECT_TRUE(curvature_field(b, CurvatureKind::Normal).degenerate[s.depth.index(50, 50)]);
}

TEST(Curvature, PlanesVanishForEveryKind) {
  for (double slant : {0.0, 20.0, 40.0, 60.0}) {
    const Scene s = plane(slant);
    const DerivativeBundle b = derivative_bundle(s.depth, kHalfCamera);
    const auto mask = test::interior_mask(s.depth);
    for (auto kind : kKinds) {
      const CurvatureField c = curvature_field(b, kind);
      for (std::size_t i = 0; i < c.value.size(); ++i) {
        if (!mask[i]) continue;
        ASSERT_TRUE(c.value.valid_at(i));
        ASSERT_LT(c.value.values()[i], 1e-6) << "slant " << slant << " " << to_string(kind);
      }
    }
  }
}

TEST(Curvature, SlopeMatchesPlaneGradient) {
  for (double slant : {10.0, 30.0, 50.0}) {
    const double a = std::tan(slant * std::numbers::pi / 180.0);
    const Scene s = plane(slant);
    const DerivativeBundle b = derivative_bundle(s.depth, kHalfCamera);
    const auto mask = test::interior_mask(s.depth);
    for (std::size_t i = 0; i < b.cx.size(); ++i) {
      if (!mask[i]) continue;
      ASSERT_NEAR(b.cx.values()[i], a, 1e-6 * a);
      ASSERT_NEAR(b.cy.values()[i], 0.0, 1e-9);
    }
  }
}

TEST(Curvature, DiagonalForms) {
  std::mt19937_64 rng(41);
  const DepthImage img = test::random_depth(rng, 20, 20, 2.0, 2.2);
  const DerivativeBundle b = derivative_bundle(img, {50, 50, 10, 10});
  const double r = std::sqrt(0.5);
  for (std::size_t i = 0; i < b.cl.size(); ++i) {
    if (!b.cl.valid_at(i)) continue;
    EXPECT_NEAR(b.cl.values()[i], r * (b.cx.values()[i] + b.cy.values()[i]), 1e-12);
    EXPECT_NEAR(b.ct.values()[i], r * (b.cx.values()[i] - b.cy.values()[i]), 1e-12);
  }
}

TEST(Curvature, StepConcentratesAtTheJump) {
  SceneSpec spec;
  spec.kind = SceneKind::Step;
  spec.width = 64;
  spec.height = 32;
  spec.K = {60.0, 60.0, 32.0, 16.0};
  spec.step.split_column = 32;
  const Scene s = generate_scene(spec);
  const DirectionalCurvatures k = directional_curvatures(derivative_bundle(s.depth, spec.K));
  const double at_jump = std::max(k.ku(31, 16), k.ku(32, 16));
  EXPECT_GT(at_jump, 0.0);
  EXPECT_GT(at_jump, 100.0 * k.ku(29, 16));
  EXPECT_GT(at_jump, 100.0 * k.ku(34, 16));

  const CurvatureField mean = curvature_field(s.depth, spec.K, CurvatureKind::Mean);
  int best = 0;
  for (int u = 1; u < 63; ++u)
    if (mean.value(u, 16) > mean.value(best, 16)) best = u;
  EXPECT_GE(best, 29);
  EXPECT_LE(best, 35);
}

TEST(Curvature, SphereMatchesSupersampledOracle) {
  const SceneSpec spec = sphere_spec();
  const Scene s = generate_scene(spec);
  const DerivativeBundle b = derivative_bundle(s.depth, spec.K);
  const DirectionalCurvatures k = directional_curvatures(b);
  const auto mask = test::interior_mask(s.depth);
  int checked = 0, close = 0;
  for (int v = 2; v < spec.height - 2; v += 3) {
    for (int u = 2; u < spec.width - 2; u += 3) {
      if (!mask[s.depth.index(u, v)]) continue;
      const auto o = test::oracle_derivatives(spec, u, v);
      if (!o) continue;
      ++checked;
      if (std::abs(b.cx(u, v) - o->cx) <= 0.05 * std::max(1.0, std::abs(o->cx)) &&
          std::abs(k.ku(u, v) - o->ku) <= 0.1 * o->ku) {
        ++close;
      }
    }
  }
  ASSERT_GT(checked, 100);
  EXPECT_GE(close, 0.95 * checked) << close << " of " << checked;

  // Near the centre of the sphere the surface faces the camera: curvature 1/r.
  const int cu = static_cast<int>(spec.K.u0), cv = static_cast<int>(spec.K.v0);
  EXPECT_NEAR(k.ku(cu, cv), 1.0 / spec.sphere.radius, 0.05 / spec.sphere.radius);
  EXPECT_NEAR(k.kv(cu, cv), 1.0 / spec.sphere.radius, 0.05 / spec.sphere.radius);
}

TEST(Curvature, FundamentalFormInvariantsProperty) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const DepthImage img = test::random_depth(rng, 16, 16, 1.0, 4.0, 0.1);
    const FundamentalForms f = fundamental_forms(derivative_bundle(img, {40, 45, 7.5, 8.5}));
    for (std::size_t i = 0; i < f.E.size(); ++i) {
      if (!f.E.valid_at(i)) continue;
      const double E = f.E.values()[i], F = f.F.values()[i], G = f.G.values()[i];
      EXPECT_GE(E, 0.0);
      EXPECT_GE(G, 0.0);
      EXPECT_NEAR(F * F, E * G, 1e-9 * std::max(1.0, E * G));
    }
    for (auto kind : kKinds) {
      const CurvatureField c = curvature_field(img, {40, 45, 7.5, 8.5}, kind);
      for (std::size_t i = 0; i < c.value.size(); ++i) {
        if (!c.value.valid_at(i)) continue;
        EXPECT_GE(c.value.values()[i], 0.0);
        EXPECT_TRUE(std::isfinite(c.value.values()[i]));
        if (c.degenerate[i]) {
          EXPECT_EQ(c.value.values()[i], 0.0);
        }
      }
    }
  }
}

TEST(Curvature, DepthScalingKeepsTheJumpPeak) {
  SceneSpec spec;
  spec.kind = SceneKind::Step;
  spec.width = 48;
  spec.height = 16;
  spec.K = {50.0, 50.0, 24.0, 8.0};
  spec.step.split_column = 20;
  const Scene s = generate_scene(spec);
  std::vector<double> doubled(s.depth.values().begin(), s.depth.values().end());
  for (auto& z : doubled) z *= 2.0;
  const DepthImage scaled = DepthImage::from_values(spec.width, spec.height, doubled);
  for (auto kind : {CurvatureKind::Mean, CurvatureKind::Max}) {
    const CurvatureField a = curvature_field(s.depth, spec.K, kind);
    const CurvatureField c = curvature_field(scaled, spec.K, kind);
    int ia = 0, ic = 0;
    for (int u = 0; u < spec.width; ++u) {
      if (a.value(u, 8) > a.value(ia, 8)) ia = u;
      if (c.value(u, 8) > c.value(ic, 8)) ic = u;
    }
    EXPECT_EQ(ia, ic) << to_string(kind);
    // Curvature has units of 1/length.
    EXPECT_NEAR(c.value(ic, 8), 0.5 * a.value(ia, 8), 1e-9 * a.value(ia, 8));
  }
}

TEST(Curvature, HolesPropagateWithoutCrashing) {
  std::mt19937_64 rng(47);
  const DepthImage img = test::random_depth(rng, 12, 12, 1.0, 2.0, 0.4);
  for (auto kind : kKinds) {
    const CurvatureField c = curvature_field(img, {30, 30, 6, 6}, kind);
    for (std::size_t i = 0; i < c.value.size(); ++i) {
      if (!img.valid_at(i)) {
        EXPECT_FALSE(c.value.valid_at(i));
      }
    }
  }
}

TEST(Curvature, Names) {
  for (auto kind : kKinds) {
    EXPECT_EQ(parse_curvature(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_curvature("principal"), std::invalid_argument);
}

}  // namespace
}  // namespace dnorm
