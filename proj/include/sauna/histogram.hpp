#pragma once

#include <string>
#include <vector>

#include "sauna/core.hpp"
#include "sauna/dataset.hpp"
#include "sauna/distance.hpp"

namespace sauna {

struct Bucket {
  Box box;
  Index count = 0;
};

/// Disjoint hyper-rectangular buckets covering the data domain, each with an
/// exact tuple count. Immutable once built; all queries on it are pure.
struct Histogram {
  std::vector<Bucket> buckets;
  Box domain;
  Index totalCount = 0;

  Index dims() const { return domain.dims(); }
};

/// Recursive equi-count partitioning: dimension i is cut into
/// round(budget^(1/D)) quantile slices, each slice recursing on the next
/// dimension. Boundaries snap to midpoints between adjacent distinct values;
/// tuples sharing a boundary value stay in the lower slice. Counts are exact.
Histogram buildEquiDepth(const Dataset& ds, Index budget);

/// Estimated tuple count inside q under the uniform-spread assumption:
/// sum of count * vol(bucket ∩ q) / vol(bucket). A bucket that is flat in
/// some dimension contributes its full count along that dimension whenever
/// the intervals touch.
double estimateCardinality(const Histogram& h, const Box& q);

/// The bucket point nearest to the query interval, per dimension: a shared
/// coordinate when the intervals overlap, else the closer bucket endpoint.
/// The selection is independent of the metric.
Vec minDistPoint(const Box& q, const Box& bucket);

/// The bucket corner farthest from the query. The farthest point of an
/// interval from a range is always an interval endpoint, so comparing the
/// per-dimension distances of both endpoints picks it for any metric.
Vec maxDistPoint(const Box& q, const Box& bucket);

/// min over all points p in the bucket of boxDistance(p, q, m).
double minDist(const Box& q, const Box& bucket, const Metric& m);

/// max over all points p in the bucket of boxDistance(p, q, m); equals the
/// maximum over the bucket's corners.
double maxDist(const Box& q, const Box& bucket, const Metric& m);

/// Flat text format: header "D totalCount", then one line per bucket:
/// lo_1 hi_1 ... lo_D hi_D count. The domain is recovered on load as the
/// bounding box of the buckets, which jointly cover it.
void saveHistogram(const Histogram& h, const std::string& path);
Histogram loadHistogram(const std::string& path);

/// 2D+1 stored reals of 8 bytes per bucket.
Index histogramByteEstimate(const Histogram& h);

}  // namespace sauna
