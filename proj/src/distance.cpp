#include "sauna/distance.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace sauna {

void validateMetric(const Metric& m, Index dims) {
  if (m.weights.size() != dims) {
    throw std::invalid_argument("metric has " + std::to_string(m.weights.size()) +
                                " weights for " + std::to_string(dims) + " dimensions");
  }
  if (!m.weights.isFinite().all() || (m.weights < 0).any()) {
    throw std::invalid_argument("metric weights must be finite and nonnegative");
  }
  if (!(m.weights > 0).any()) {
    throw std::invalid_argument("metric needs at least one strictly positive weight");
  }
  for (const auto& [name, w] : m.categoricalWeights) {
    if (!(w >= 0) || !std::isfinite(w)) {
      throw std::invalid_argument("categorical weight for '" + name + "' must be finite and >= 0");
    }
  }
}

double boxDistance(const Vec& point, const Box& box, const Metric& m) {
  if (point.size() != box.dims() || m.weights.size() != box.dims()) {
    throw std::invalid_argument("boxDistance: dimension mismatch");
  }
  return aggregateNorm(perDimDistances(point, box.lo, box.hi) * m.weights, m.norm);
}

Vec aspectWeights(const Box& box, double zeroWidthCap) {
  Vec range = box.widths();
  double maxRange = range.maxCoeff();
  if (maxRange <= 0) return Vec::Ones(box.dims());  // point query: all dimensions equal
  Vec w(box.dims());
  for (Index i = 0; i < box.dims(); ++i) {
    w(i) = range(i) > 0 ? maxRange / range(i) : zeroWidthCap;
  }
  return w;
}

Vec inverseWeights(const Box& box, double zeroWidthFloor) {
  Vec range = box.widths();
  double maxRange = range.maxCoeff();
  if (maxRange <= 0) return Vec::Ones(box.dims());
  return (range / maxRange).cwiseMax(zeroWidthFloor);
}

double similarity(std::int32_t code, const CategoricalStats& stats) {
  if (code < 0 || code >= static_cast<std::int32_t>(stats.freq.size())) {
    throw std::invalid_argument("similarity: value not present in the frequency table");
  }
  if (stats.total < 2) return 1.0;
  const double fv = static_cast<double>(stats.freq[code]);
  double sum = 0.0;
  for (Index f : stats.freq) {
    if (static_cast<double>(f) <= fv) sum += static_cast<double>(f) * (static_cast<double>(f) - 1.0);
  }
  const double n = static_cast<double>(stats.total);
  return 1.0 - sum / (n * (n - 1.0));
}

double categoricalDistance(std::int32_t a, std::int32_t b, const CategoricalStats& stats) {
  if (a == b) {
    // still reject unknown codes
    similarity(a, stats);
    return 0.0;
  }
  return similarity(a, stats) * similarity(b, stats);
}

double rowDistance(const Dataset& ds, Index row, const BoxQuery& q, const Metric& m) {
  const Index d = q.dims();
  if (ds.numericDims() != d || m.weights.size() != d) {
    throw std::invalid_argument("rowDistance: dimension mismatch");
  }

  double sum = 0.0;    // L1 / L2 accumulator
  double worst = 0.0;  // LInf accumulator
  auto feed = [&](double component) {
    switch (m.norm) {
      case Norm::L1:
        sum += component;
        break;
      case Norm::L2:
        sum += component * component;
        break;
      case Norm::LInf:
        worst = std::max(worst, component);
        break;
    }
  };

  for (Index i = 0; i < d; ++i) {
    feed(perDimDistance(ds.numericColumn(i)(row), q.box.lo(i), q.box.hi(i)) * m.weights(i));
  }

  for (const auto& [attr, label] : q.catEquals) {
    Index c = ds.catIndexOf(attr);
    if (c < 0) throw std::invalid_argument("unknown categorical attribute '" + attr + "'");
    const auto& stats = ds.catStats(c);
    std::int32_t want = stats.code(label);
    std::int32_t have = ds.catColumn(c)[row];
    auto it = m.categoricalWeights.find(attr);
    double w = it == m.categoricalWeights.end() ? 0.0 : it->second;
    if (w <= 0.0) {
      // hard filter
      if (want != have) return std::numeric_limits<double>::infinity();
      continue;
    }
    if (want < 0) {
      throw std::invalid_argument("categorical value '" + label + "' not present in attribute '" +
                                  attr + "'");
    }
    feed(categoricalDistance(have, want, stats) * w);
  }

  switch (m.norm) {
    case Norm::L1:
      return sum;
    case Norm::L2:
      return std::sqrt(sum);
    case Norm::LInf:
      return worst;
  }
  return 0.0;
}

Metric resolveMetric(const MetricSpec& spec, const Box& queryBox) {
  Metric m;
  m.norm = spec.norm;
  m.categoricalWeights = spec.categoricalWeights;
  switch (spec.scheme) {
    case WeightScheme::Aspect:
      m.weights = aspectWeights(queryBox);
      break;
    case WeightScheme::Inverse:
      m.weights = inverseWeights(queryBox);
      break;
    case WeightScheme::Explicit:
      m.weights = spec.explicitWeights;
      break;
  }
  validateMetric(m, queryBox.dims());
  return m;
}

Metric queryMetric(const BoxQuery& q) {
  Metric m;
  m.norm = q.norm;
  m.weights = q.weights ? *q.weights : aspectWeights(q.box);
  validateMetric(m, q.dims());
  return m;
}

MetricSpec parseWeighting(const std::string& text) {
  MetricSpec spec;
  if (text == "aspect") {
    spec.scheme = WeightScheme::Aspect;
  } else if (text == "inverse") {
    spec.scheme = WeightScheme::Inverse;
  } else if (text.rfind("explicit:", 0) == 0) {
    spec.scheme = WeightScheme::Explicit;
    std::vector<double> ws;
    std::stringstream ss(text.substr(9));
    std::string cell;
    while (std::getline(ss, cell, ',')) ws.push_back(parseDouble(cell));
    if (ws.empty()) throw std::invalid_argument("explicit weighting needs at least one weight");
    spec.explicitWeights = Eigen::Map<const Vec>(ws.data(), static_cast<Index>(ws.size()));
  } else {
    throw std::invalid_argument("unknown weighting '" + text +
                                "' (expected aspect, inverse or explicit:<w1,...>)");
  }
  return spec;
}

}  // namespace sauna
