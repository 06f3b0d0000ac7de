#include <cmath>
#include <cstdio>

#include "modsi/errors.hpp"

namespace modsi {
namespace {

std::string describe_zeros(const std::vector<double>& zeros, double T) {
  std::string msg = "correction filter is singular: |R| vanishes at";
  const double unit = M_PI / T;
  char buf[64];
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s ω = %+.4fπ/T", i == 0 ? "" : ",", zeros[i] / unit);
    msg += buf;
  }
  return msg;
}

}  // namespace

SingularFilterError::SingularFilterError(std::vector<double> zeros, double T)
    : Error(describe_zeros(zeros, T)), zeros_(std::move(zeros)) {}

LatticeRoundingError::LatticeRoundingError(const std::string& what, double slack)
    : Error(what), slack_(slack) {}

}  // namespace modsi
