// Per-pixel order statistics of the 3x3 depth neighborhood.

#pragma once

#include <array>
#include <string_view>

#include "dnorm/core.hpp"

namespace dnorm {

struct KendallCounts {
  int concordant = 0;  // z_q < z_p
  int discordant = 0;  // z_q > z_p
  int ties = 0;
};

KendallCounts kendall_counts(const Neighborhood& nb);

// |mu_c - mu_d| / (mu_c + mu_d); 1 when every present neighbor ties.
double kendall_tau(const KendallCounts& counts);

// tau at every pixel with at least three present neighbors.
ScalarField kendall_field(const DepthImage& img);

// How the center-prefixed sequence psi+ = (z_q, z_p1, ..., z_p8) is paired
// with the neighbor sequence psi = (z_p1, ..., z_p8).
enum class PearsonPairing {
  // (z_q, z_p1, ..., z_p7) against (z_p1, ..., z_p8): |lag-1 serial correlation|.
  Lag1,
  // psi padded with its own mean in front, paired element-wise with psi+.
  MeanPadded,
};

struct SequencePair {
  std::array<double, kNeighborCount> psi{};
  std::array<double, kNeighborCount + 1> psi_plus{};
  int length = 0;  // present neighbors; psi_plus holds length + 1 values
};

// Absent neighbors are skipped; the fixed neighbor order is preserved.
SequencePair sequence_pair(const Neighborhood& nb);

// |Pearson correlation| of the paired sequences; 1 when either side has zero variance.
double pearson_epsilon(const SequencePair& seq, PearsonPairing pairing = PearsonPairing::Lag1);

ScalarField pearson_field(const DepthImage& img, PearsonPairing pairing = PearsonPairing::Lag1);

std::string_view to_string(PearsonPairing pairing);

}  // namespace dnorm
