#include "sauna/core.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace sauna {

std::string formatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parseDouble(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::runtime_error("not a number: '" + s + "'");
  }
  return v;
}

std::string normName(Norm n) {
  switch (n) {
    case Norm::L1:
      return "l1";
    case Norm::L2:
      return "l2";
    case Norm::LInf:
      return "linf";
  }
  return "l2";
}

Norm parseNorm(const std::string& name) {
  if (name == "l1") return Norm::L1;
  if (name == "l2") return Norm::L2;
  if (name == "linf") return Norm::LInf;
  throw std::invalid_argument("unknown norm '" + name + "' (expected l1, l2 or linf)");
}

}  // namespace sauna
