// Discontinuity discrimination: replace a pixel's normal by a neighbor's
// when the neighbor sits on smoother, more order-consistent depth.
//
// The refinement minimizes
//
//   E(N) = sum_q sigma |n_q - m_q|
//        + sum_{q~p} (lambda / 8) (k_q w_p + k_p w_q) |m_p - m_q|,   w = 1 - max(tau, eps)
//
// where q~p runs over unordered 8-neighbor pairs, so each pair carries both
// of its directed terms.
// over labels m drawn from the current normals of each pixel's 3x3
// neighborhood, where n is the observed (estimated) normal field. Inference
// is iterated conditional modes over four interleaved 2x2 phases; pixels in
// one phase share no edge, so each phase is an exact block coordinate step
// and the energy never increases.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dnorm/core.hpp"
#include "dnorm/correlation.hpp"
#include "dnorm/curvature.hpp"
#include "dnorm/sne.hpp"

namespace dnorm {

// Argmin of k over the 3x3 neighborhood (center first, then neighbor order
// on ties); the pixel adopts that neighbor's normal.
NormalMap select_by_curvature(const NormalMap& normals, const ScalarField& k);

// Argmax counterpart for tau / eps fields.
NormalMap select_by_correlation(const NormalMap& normals, const ScalarField& coeff);

enum class CorrelationCombine { Max, Kendall, Pearson };

struct CrfConfig {
  double sigma = 1.0;
  double lambda = 1.0;  // split evenly over the 8 edges
  int max_sweeps = 10;
  double tolerance_deg = 0.05;
  CorrelationCombine combine = CorrelationCombine::Max;

  void validate() const;
};

struct CrfEnergyReport {
  // energies[0] is the energy of the input; energies[s] follows sweep s.
  std::vector<double> energies;
  int sweeps = 0;
  bool converged = false;
};

struct CrfResult {
  NormalMap normals;
  CrfEnergyReport report;
};

// Missing curvature counts as 0 and missing correlation as 1, both of which
// switch the affected edge off.
CrfResult crf_refine(const NormalMap& normals, const ScalarField& k, const ScalarField& tau,
                     const ScalarField& eps, const CrfConfig& cfg = {});

struct PlusConfig {
  SneConfig sne{};
  CurvatureKind curvature = CurvatureKind::Mean;
  PearsonPairing pairing = PearsonPairing::Lag1;
  CrfConfig crf{};
};

struct PlusResult {
  NormalMap normals;
  CrfEnergyReport crf;
  std::vector<std::pair<std::string, double>> stage_ms;
};

// 3F2N estimate -> curvature, Kendall and Pearson fields -> CRF refinement.
PlusResult estimate_3f2n_plus(const DepthImage& img, const CameraIntrinsics& K, const PlusConfig& cfg = {});

std::string_view to_string(CorrelationCombine combine);
CorrelationCombine parse_combine(std::string_view name);

}  // namespace dnorm
