// Gradient kernels, the second-difference stencil, and the central-tendency
// measures used to aggregate per-neighbor estimates.

#pragma once

#include <span>
#include <string_view>
#include <utility>

#include "dnorm/core.hpp"

namespace dnorm {

enum class FilterKind { FD, Roberts, Prewitt, Sobel, Scharr };

// Every kernel is normalized so that its response to f = u (resp. f = v) is
// exactly 1, so the filters are interchangeable.
struct GradientFilter {
  FilterKind kind = FilterKind::FD;
};

enum class TendencyKind { Mean, Median, Trimean, TrimmedMean };

struct CentralTendency {
  TendencyKind kind = TendencyKind::Median;
  double trim = 0.25;  // per tail, TrimmedMean only
};

struct Gradient {
  ScalarField du;
  ScalarField dv;
};

// Full stencil where every tap is valid; otherwise a one-sided difference
// along that axis (forward, then backward). Invalid where neither exists.
Gradient gradient(const ScalarField& field, GradientFilter filter);

enum class Axis { U, V };

// [1, -2, 1] along the axis; invalid on the border and next to holes.
ScalarField second_derivative(const ScalarField& field, Axis axis);

// Mean; lower-middle median; trimean (Q1 + 2 Q2 + Q3) / 4 with quartiles by
// inclusive linear interpolation; trimmed mean dropping floor(trim * n)
// samples per tail. `samples` is reordered. Throws on an empty set.
double central_tendency(std::span<double> samples, CentralTendency tendency);

// Percentile in [0, 1] of sorted data by inclusive linear interpolation.
double interpolated_quantile(std::span<const double> sorted, double p);

std::string_view to_string(FilterKind kind);
std::string_view to_string(TendencyKind kind);
FilterKind parse_filter(std::string_view name);
TendencyKind parse_tendency(std::string_view name);

}  // namespace dnorm
