#pragma once

#include <optional>

#include "dnorm/core.hpp"

namespace dnorm {

// Per-pixel angle in degrees between est and gt, evaluated where both maps
// are valid and (if given) the mask field is valid and non-zero. Computed as
// atan2(|a x b|, a . b): the same angle as the clamped arccos of the
// normalized inner product, but exact for (anti)parallel inputs. Throws on
// shape mismatch.
ScalarField angular_error_map(const NormalMap& est, const NormalMap& gt, const ScalarField* mask = nullptr);

// Mean over the valid pixels of the error map, restricted to pixels where
// mask is valid and non-zero if a mask is given. Throws std::invalid_argument
// if nothing is evaluated.
double mean_angular_error(const ScalarField& error_map, const ScalarField* mask = nullptr);

struct RegionBreakdown {
  std::optional<double> band;
  std::optional<double> interior;
  std::size_t band_count = 0;
  std::size_t interior_count = 0;
};

// Band pixels are those with band_mask != 0; an empty region stays empty.
RegionBreakdown region_breakdown(const ScalarField& error_map, const ScalarField& band_mask);

}  // namespace dnorm
