#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sauna/dataset.hpp"

namespace sauna {

/// Deterministic, portable random source: the std::mt19937_64 engine (whose
/// output sequence the standard fixes) with hand-rolled uniform and
/// Box-Muller gaussian transforms, so identical seeds give identical
/// datasets on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0, 1): top 53 bits of one engine draw.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniformIn(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t bits() { return eng_(); }

  /// One draw in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  double gaussian(double mean, double stddev);

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

/// Rank sampler for P(r) proportional to r^-z over ranks 1..values.
class ZipfSampler {
 public:
  ZipfSampler(Index values, double z);
  Index draw(Rng& rng) const;  // 1-based rank
  const std::vector<double>& cdf() const { return cdf_; }

 private:
  std::vector<double> cdf_;
};

/// Exact apportionment of n tuples to ranks 1..values with zipfian shares
/// (largest-remainder rounding): each count is within one tuple of n * p_r
/// and the counts sum to n.
std::vector<Index> zipfFrequencies(Index n, Index values, double z);

struct GenSpec {
  enum class Kind { Gauss, Array };
  Kind kind = Kind::Array;
  Index n = 1;
  Index dims = 1;
  double zipf = 1.0;
  Index bells = 10;        // gauss only
  double variance = -1.0;  // gauss only; <= 0 selects (domain width / 20)^2 per dimension
  std::uint64_t seed = 0;
  Index valuesPerDim = 1000;  // array only

  void validate() const;
};

/// Overlapping gaussian bells: centers drawn uniformly in the domain, the
/// bell per tuple drawn with zipfian rank probabilities, coordinates drawn
/// axis-aligned around the chosen center and redrawn (up to a bounded number
/// of times, then clamped) until they land inside the domain.
Dataset genGauss(const GenSpec& spec, const Box& domain);

/// Independent per-attribute value sets: `valuesPerDim` distinct values
/// evenly spaced across the domain, with exactly zipf-apportioned
/// frequencies, shuffled independently per attribute.
Dataset genArray(const GenSpec& spec, const Box& domain);

/// Axis-aligned template swept over the domain: the smallest grid side g
/// with g^dims >= count tiles each dimension into g equal slices. The first
/// count-1 queries are grid tiles in row-major order; when the grid has
/// surplus tiles the final query is the bounding box of the leftovers, so
/// exactly `count` queries still cover the domain.
std::vector<BoxQuery> genWorkload(const Box& domain, Index count, Index dims);

}  // namespace sauna
