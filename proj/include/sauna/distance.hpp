#pragma once

#include <cmath>
#include <map>
#include <string>

#include "sauna/core.hpp"
#include "sauna/dataset.hpp"

namespace sauna {

// Weight caps for zero-width query dimensions: aspect weighting divides by
// the range, inverse weighting multiplies by it. Both stay finite.
inline constexpr double kZeroWidthWeightCap = 1e6;
inline constexpr double kZeroWidthWeightFloor = 1e-6;

/// Weighted p-norm over per-dimension box distances. Categorical predicates
/// are hard filters unless the attribute is given a weight here, in which
/// case its frequency-based distance joins the norm as one more component.
struct Metric {
  Norm norm = Norm::L2;
  Vec weights;  // per numeric dimension, >= 0, at least one > 0
  std::map<std::string, double> categoricalWeights;
};

/// Throws std::invalid_argument unless weights are finite, nonnegative,
/// of length `dims`, with at least one strictly positive.
void validateMetric(const Metric& m, Index dims);

/// Distance of coordinate p to the interval [lo, hi]; zero inside.
inline double perDimDistance(double p, double lo, double hi) {
  if (p > hi) return p - hi;
  if (p < lo) return lo - p;
  return 0.0;
}

/// Per-dimension distances of a point to a box, as an Eigen expression.
/// At most one of the two clamped terms is nonzero per dimension.
template <typename P, typename L, typename H>
auto perDimDistances(const Eigen::ArrayBase<P>& p, const Eigen::ArrayBase<L>& lo,
                     const Eigen::ArrayBase<H>& hi) {
  return (p - hi).cwiseMax(0.0) + (lo - p).cwiseMax(0.0);
}

inline double aggregateNorm(const Vec& components, Norm norm) {
  if (components.size() == 0) return 0.0;
  switch (norm) {
    case Norm::L1:
      return components.abs().sum();
    case Norm::L2:
      return std::sqrt((components * components).sum());
    case Norm::LInf:
      return components.abs().maxCoeff();
  }
  return 0.0;
}

/// Weighted p-norm distance of a point to a box. Zero for points within or
/// on the box; reference points lie on the nearest face or corner.
double boxDistance(const Vec& point, const Box& box, const Metric& m);

/// Shape-proportional weights: w_i = max_j(range_j) / range_i, so that an
/// equal-distance relaxation expands every dimension in proportion to its
/// original range. Zero-width dimensions get `zeroWidthCap`; if every
/// dimension is zero-width the query is a point and all weights are 1.
Vec aspectWeights(const Box& box, double zeroWidthCap = kZeroWidthWeightCap);

/// Inverse-proportional weights: w_i = range_i / max_j(range_j), floored at
/// `zeroWidthFloor` so the norm stays definite.
Vec inverseWeights(const Box& box, double zeroWidthFloor = kZeroWidthWeightFloor);

/// Frequency-based self-similarity of a categorical value:
/// Sim(v) = 1 - sum over {l : f_l <= f_v} of f_l(f_l-1) / (n(n-1)).
/// Values tied in frequency count toward each other's sums. Sim is 1 when
/// n < 2. Throws std::invalid_argument for codes outside the table.
double similarity(std::int32_t code, const CategoricalStats& stats);

/// 0 for equal values, else Sim(a) * Sim(b); symmetric, in [0,1], and
/// smaller the more frequent either value is.
double categoricalDistance(std::int32_t a, std::int32_t b, const CategoricalStats& stats);

/// Distance of one dataset tuple to a query under `m`. Numeric dimensions
/// contribute weighted per-dimension distances; each categorical predicate
/// contributes DIST*weight when weighted, and +infinity on a mismatch when
/// not (hard filter).
double rowDistance(const Dataset& ds, Index row, const BoxQuery& q, const Metric& m);

enum class WeightScheme { Aspect, Inverse, Explicit };

/// Metric recipe as it appears in CLI/benchmark configuration.
struct MetricSpec {
  Norm norm = Norm::L2;
  WeightScheme scheme = WeightScheme::Aspect;
  Vec explicitWeights;  // used when scheme == Explicit
  std::map<std::string, double> categoricalWeights;
};

Metric resolveMetric(const MetricSpec& spec, const Box& queryBox);

/// Metric implied by the query itself: its own weights and norm when it
/// carries them, aspect weighting otherwise.
Metric queryMetric(const BoxQuery& q);

/// Parses "aspect" | "inverse" | "explicit:w1,w2,...".
MetricSpec parseWeighting(const std::string& text);

}  // namespace sauna
