#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <string>

namespace sauna {

// Per-dimension quantities (bounds, weights, coordinates) are dense arrays so
// that geometry code stays coefficient-wise.
using Vec = Eigen::ArrayXd;
using Index = std::int64_t;

enum class Norm { L1, L2, LInf };

inline Vec vec(std::initializer_list<double> values) {
  Vec out(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) out(i++) = v;
  return out;
}

/// Axis-aligned box: one closed interval [lo(i), hi(i)] per dimension.
struct Box {
  Vec lo;
  Vec hi;

  Index dims() const { return lo.size(); }

  bool contains(const Vec& p) const {
    return (p >= lo).all() && (p <= hi).all();
  }
  bool contains(const Box& other) const {
    return (other.lo >= lo).all() && (other.hi <= hi).all();
  }
  bool intersects(const Box& other) const {
    return (lo <= other.hi).all() && (other.lo <= hi).all();
  }
  Vec widths() const { return hi - lo; }
  double volume() const { return (hi - lo).prod(); }
};

inline Box box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  return Box{vec(lo), vec(hi)};
}

std::string formatDouble(double v);        // shortest round-trip representation
double parseDouble(const std::string& s);  // throws std::runtime_error on junk

std::string normName(Norm n);
Norm parseNorm(const std::string& name);  // "l1" | "l2" | "linf"

}  // namespace sauna
