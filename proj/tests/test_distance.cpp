#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sauna/distance.hpp"
#include "testutil.hpp"

using namespace sauna;
using namespace sauna::testutil;

namespace {

Metric l2(std::initializer_list<double> weights) {
  return Metric{Norm::L2, vec(weights), {}};
}

}  // namespace

TEST_CASE("per-dimension distance branches") {
  CHECK(perDimDistance(2.5, 1, 3) == 0.0);
  CHECK(perDimDistance(5, 1, 3) == 2.0);
  CHECK(perDimDistance(0, 1, 3) == 1.0);
  CHECK(perDimDistance(1, 1, 3) == 0.0);  // on the boundary
  CHECK(perDimDistance(3, 1, 3) == 0.0);
}

TEST_CASE("box distance, euclidean") {
  const Box b = box({0, 0}, {3, 3});
  CHECK(boxDistance(vec({2, 2}), b, l2({1, 1})) == 0.0);
  CHECK(boxDistance(vec({4, 5}), b, l2({1, 1})) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(boxDistance(vec({4, 5}), b, l2({2, 1})) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("box distance, other norms") {
  const Box b = box({0, 0}, {3, 3});
  const Vec p = vec({4, 5});  // component distances (1, 2)
  CHECK(boxDistance(p, b, Metric{Norm::L1, vec({1, 1}), {}}) == doctest::Approx(3.0));
  CHECK(boxDistance(p, b, Metric{Norm::LInf, vec({1, 1}), {}}) == doctest::Approx(2.0));
}

TEST_CASE("box distance rejects dimension mismatch") {
  CHECK_THROWS_AS(boxDistance(vec({1, 2, 3}), box({0}, {1}), l2({1})), std::invalid_argument);
}

TEST_CASE("metric validation") {
  CHECK_THROWS_AS(validateMetric(Metric{Norm::L2, vec({0, 0}), {}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(validateMetric(Metric{Norm::L2, vec({-1, 1}), {}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(validateMetric(Metric{Norm::L2, vec({1}), {}}, 2), std::invalid_argument);
  CHECK_NOTHROW(validateMetric(Metric{Norm::L2, vec({0, 1}), {}}, 2));
}

TEST_CASE("periphery beats center proximity") {
  // P sits just off a face, Q far beyond a corner but nearer the center line
  const Box b = box({0, 0}, {4, 4});
  const Metric m = l2({1, 1});
  CHECK(boxDistance(vec({4.5, 2}), b, m) == doctest::Approx(0.5));
  CHECK(boxDistance(vec({3, 7}), b, m) == doctest::Approx(3.0));
}

TEST_CASE("aspect weights") {
  CHECK((aspectWeights(box({0, 0}, {10, 5})) == vec({1, 2})).all());
  CHECK((aspectWeights(box({0, 0, 0}, {4, 4, 4})) == vec({1, 1, 1})).all());

  const Vec w = aspectWeights(box({0, 5}, {10, 5}));
  CHECK(w(0) == 1.0);
  CHECK(w(1) == kZeroWidthWeightCap);

  // all dimensions zero-width: a point query, every weight 1
  CHECK((aspectWeights(box({2, 3}, {2, 3})) == vec({1, 1})).all());
}

TEST_CASE("inverse weights") {
  CHECK((inverseWeights(box({0, 0}, {10, 5})) == vec({1, 0.5})).all());
  CHECK((inverseWeights(box({0, 0}, {4, 4})) == vec({1, 1})).all());

  const Vec w = inverseWeights(box({0, 5}, {10, 5}));
  CHECK(w(0) == 1.0);
  CHECK(w(1) == kZeroWidthWeightFloor);

  CHECK((inverseWeights(box({2, 3}, {2, 3})) == vec({1, 1})).all());
}

TEST_CASE("zero distance inside, positive outside") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Index dims = 1 + static_cast<Index>(rng() % 4);
    Box domain{Vec::Ones(dims) * -10, Vec::Ones(dims) * 10};
    Box b = randomBoxIn(rng, domain, /*allowZeroWidth=*/false);
    Metric m;
    m.norm = Norm::L2;
    m.weights = Vec::Ones(dims) * (0.5 + unit(rng));

    Vec inside(dims), outside(dims);
    for (Index i = 0; i < dims; ++i) {
      inside(i) = b.lo(i) + unit(rng) * (b.hi(i) - b.lo(i));
      outside(i) = inside(i);
    }
    const Index bump = static_cast<Index>(rng() % static_cast<std::uint64_t>(dims));
    outside(bump) = b.hi(bump) + 0.1 + unit(rng);

    CHECK(boxDistance(inside, b, m) == 0.0);
    CHECK(boxDistance(outside, b, m) > 0.0);
  }
}

TEST_CASE("enlarging the box never increases distance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Index dims = 1 + static_cast<Index>(rng() % 4);
    Box domain{Vec::Ones(dims) * -10, Vec::Ones(dims) * 10};
    Box b = randomBoxIn(rng, domain);
    Metric m = randomMetric(rng, b);

    Vec p(dims);
    for (Index i = 0; i < dims; ++i) p(i) = -15 + 30 * unit(rng);
    const double before = boxDistance(p, b, m);

    Box bigger = b;
    const Index dim = static_cast<Index>(rng() % static_cast<std::uint64_t>(dims));
    if (unit(rng) < 0.5) {
      bigger.lo(dim) -= unit(rng) * 3;
    } else {
      bigger.hi(dim) += unit(rng) * 3;
    }
    CHECK(boxDistance(p, bigger, m) <= before + 1e-12);
  }
}

TEST_CASE("equidistant locus MBR tracks the aspect ratio") {
  // at distance r the MBR half-extent on dimension i is r / w_i
  const Box b = box({0, 0, 0}, {12, 3, 6});
  const Vec w = aspectWeights(b);
  const double r = 2.5;
  const Vec widths = b.widths();
  for (Index i = 0; i < 3; ++i) {
    const double halfExtent = r / w(i);
    CHECK(halfExtent / widths(i) == doctest::Approx(r / widths.maxCoeff()).epsilon(1e-12));
    // the half-extent point is exactly at distance r
    Vec p = Vec::Zero(3);
    p(i) = b.hi(i) + halfExtent;
    CHECK(boxDistance(p, b, Metric{Norm::L2, w, {}}) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("similarity fixture {a,a,a,b,b}") {
  const std::vector<std::string> column{"a", "a", "a", "b", "b"};
  const Dataset ds = catDataset(column);
  const auto& stats = ds.catStats(0);

  CHECK(similarity(stats.code("b"), stats) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(similarity(stats.code("a"), stats) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(similarity(stats.code("b"), stats) == doctest::Approx(simOracle(column, "b")));
  CHECK(similarity(stats.code("a"), stats) == doctest::Approx(simOracle(column, "a")));

  CHECK_THROWS_AS(similarity(99, stats), std::invalid_argument);
}

TEST_CASE("similarity of a single-tuple column is 1") {
  const Dataset ds = catDataset({"a"});
  CHECK(similarity(0, ds.catStats(0)) == 1.0);
}

TEST_CASE("categorical distance fixture") {
  const Dataset ds = catDataset({"a", "a", "a", "b", "b"});
  const auto& stats = ds.catStats(0);
  const auto a = stats.code("a");
  const auto b = stats.code("b");

  CHECK(categoricalDistance(a, a, stats) == 0.0);
  CHECK(categoricalDistance(b, b, stats) == 0.0);
  CHECK(categoricalDistance(a, b, stats) == doctest::Approx(0.54).epsilon(1e-12));
  CHECK(categoricalDistance(a, b, stats) == categoricalDistance(b, a, stats));
}

TEST_CASE("frequency ties count toward each other") {
  // f_a = f_b = 2, f_c = 1: the tied values enter each other's sums
  const std::vector<std::string> column{"a", "a", "b", "b", "c"};
  const Dataset ds = catDataset(column);
  const auto& stats = ds.catStats(0);
  CHECK(similarity(stats.code("a"), stats) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(similarity(stats.code("b"), stats) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(categoricalDistance(stats.code("a"), stats.code("b"), stats) ==
        doctest::Approx(0.64).epsilon(1e-12));
  CHECK(similarity(stats.code("a"), stats) == doctest::Approx(simOracle(column, "a")));
}

TEST_CASE("rarer values are more similar, random frequency tables") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int distinct = 2 + static_cast<int>(rng() % 12);
    std::vector<std::string> column;
    std::vector<std::pair<std::string, long>> freqs;
    for (int v = 0; v < distinct; ++v) {
      const long f = 1 + static_cast<long>(rng() % 40);
      freqs.emplace_back("v" + std::to_string(v), f);
      for (long k = 0; k < f; ++k) column.push_back(freqs.back().first);
    }
    const Dataset ds = catDataset(column);
    const auto& stats = ds.catStats(0);

    for (const auto& [label, f] : freqs) {
      const double s = similarity(stats.code(label), stats);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
      CHECK(s == doctest::Approx(simOracle(column, label)).epsilon(1e-12));
    }
    for (const auto& [l1, f1] : freqs) {
      for (const auto& [l2, f2] : freqs) {
        if (f1 < f2) {  // Sim non-increasing in frequency
          CHECK(similarity(stats.code(l1), stats) >= similarity(stats.code(l2), stats) - 1e-12);
        }
        const double d12 = categoricalDistance(stats.code(l1), stats.code(l2), stats);
        CHECK(d12 == categoricalDistance(stats.code(l2), stats.code(l1), stats));
        CHECK(d12 >= 0.0);
        CHECK(d12 <= 1.0);
        if (l1 == l2) CHECK(d12 == 0.0);
      }
    }
  }
}

TEST_CASE("more frequent pairs are farther apart on a frequency ladder") {
  // frequencies a:3 > b:2 > c:1
  const Dataset ds = catDataset({"a", "a", "a", "b", "b", "c"});
  const auto& stats = ds.catStats(0);
  const auto a = stats.code("a"), b = stats.code("b"), c = stats.code("c");
  CHECK(categoricalDistance(a, c, stats) < categoricalDistance(b, c, stats));
  CHECK(categoricalDistance(a, b, stats) < categoricalDistance(b, c, stats));
}

TEST_CASE("row distance with a weighted categorical term") {
  std::vector<double> x{0.0, 5.0, 9.0};
  Vec col = Eigen::Map<const Vec>(x.data(), 3);
  Dataset ds({{{"x0", AttrKind::Numeric}, {"c", AttrKind::Categorical}}}, {col},
             {{"a", "a", "b"}});
  const auto& stats = ds.catStats(0);

  BoxQuery q;
  q.box = box({4}, {6});
  q.catEquals = {{"c", "a"}};

  Metric hard{Norm::L2, vec({1}), {}};
  CHECK(rowDistance(ds, 1, q, hard) == 0.0);
  CHECK(std::isinf(rowDistance(ds, 2, q, hard)));  // fails the hard filter

  Metric soft{Norm::L2, vec({1}), {{"c", 2.0}}};
  const double dist = categoricalDistance(stats.code("b"), stats.code("a"), stats);
  CHECK(rowDistance(ds, 2, q, soft) ==
        doctest::Approx(std::sqrt(9.0 + 4.0 * dist * dist)).epsilon(1e-12));
  CHECK(rowDistance(ds, 1, q, soft) == 0.0);

  BoxQuery unknownAttr = q;
  unknownAttr.catEquals = {{"missing", "a"}};
  CHECK_THROWS_AS(rowDistance(ds, 0, unknownAttr, hard), std::invalid_argument);
}

TEST_CASE("query-implied metric") {
  BoxQuery q;
  q.box = box({0, 0}, {10, 5});
  CHECK((queryMetric(q).weights == vec({1, 2})).all());  // aspect by default
  CHECK(queryMetric(q).norm == Norm::L2);

  q.weights = vec({3, 7});
  q.norm = Norm::L1;
  CHECK((queryMetric(q).weights == vec({3, 7})).all());
  CHECK(queryMetric(q).norm == Norm::L1);
}

TEST_CASE("weighting parser") {
  CHECK(parseWeighting("aspect").scheme == WeightScheme::Aspect);
  CHECK(parseWeighting("inverse").scheme == WeightScheme::Inverse);
  const auto spec = parseWeighting("explicit:1,0.5,2");
  CHECK(spec.scheme == WeightScheme::Explicit);
  CHECK((spec.explicitWeights == vec({1, 0.5, 2})).all());
  CHECK_THROWS(parseWeighting("fancy"));
}
