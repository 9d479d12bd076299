// Depth-curvature fields used to measure local smoothness of a depth map.
//
// The camera-frame derivatives are
//
//   c_x  = fx / ((u - u0) + z e_u),             e_u = 1 / (dz/du)
//   c_xx = -fx^2 alpha_0 / alpha_1^3,           alpha_0 = e_u (2 - z e_u^2 e_uu)
//                                               alpha_1 = (u - u0) + z e_u
//
// and their v / diagonal twins. As written they diverge wherever dz/du = 0,
// i.e. on every fronto-parallel patch. Multiplying through by (dz/du)^3
// gives the finite forms used here:
//
//   c_x  = fx d_u / A,     c_xx = -fx^2 B_u / A^3,
//   A    = (u - u0) d_u + z,
//   B_u  = 2 d_u^2 - z e_uu  =  z^3 d^2(1/z)/du^2.
//
// d_u and B_u are evaluated on inverse depth (d_u = -z^2 d(1/z)/du), which
// is affine in (u, v) on any camera-space plane, so every curvature vanishes
// exactly on planes. The raw pixel-domain derivatives (FD on z, [1,-2,1] on
// z) are kept alongside for inspection.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dnorm/core.hpp"

namespace dnorm {

struct DerivativeBundle {
  ScalarField z;
  // Raw pixel-domain derivatives of z.
  ScalarField du, dv, euu, evv;
  // Inverse-depth forms: slope = dz/du, bend = 2 (dz/du)^2 - z d2z/du2.
  ScalarField slope_u, slope_v, bend_u, bend_v;
  // Camera-frame first and second derivatives along x, y and the diagonals.
  ScalarField cx, cy, cl, ct;
  ScalarField cxx, cyy, cll, ctt;
  // Singular auxiliaries; invalid wherever the slope is zero.
  ScalarField eu, ev, alpha0, alpha1, beta0, beta1;
};

DerivativeBundle derivative_bundle(const DepthImage& img, const CameraIntrinsics& K);

struct DirectionalCurvatures {
  ScalarField ku, kv, kg, kb;
};

// k = |c_ss| / (1 + c_s^2)^(3/2) along u, v and the leading (g) and
// trailing (b) diagonals.
DirectionalCurvatures directional_curvatures(const DerivativeBundle& bundle);

struct FundamentalForms {
  ScalarField E, F, G;
  ScalarField L, M, N;
};

// E = c_x^2, F = c_x c_y, G = c_y^2, L = c_xx c_yy, M = c_xx c_ll, N = c_tt c_yy.
FundamentalForms fundamental_forms(const DerivativeBundle& bundle);

enum class CurvatureKind { Mean, Max, Normal, Gauss };

struct CurvatureField {
  ScalarField value;                    // >= 0 wherever valid
  std::vector<std::uint8_t> degenerate; // row-major; 0/0 quotient defined as 0
};

// Mean and Max aggregate the eight neighbors' directional curvatures along
// the axis joining each neighbor to the center (W/E: k_u, N/S: k_v,
// NW/SE: k_g, NE/SW: k_b). Normal and Gauss evaluate the fundamental-form
// quotients at the pixel itself.
CurvatureField curvature_field(const DerivativeBundle& bundle, CurvatureKind kind);
CurvatureField curvature_field(const DepthImage& img, const CameraIntrinsics& K, CurvatureKind kind);

std::string_view to_string(CurvatureKind kind);
CurvatureKind parse_curvature(std::string_view name);

}  // namespace dnorm
