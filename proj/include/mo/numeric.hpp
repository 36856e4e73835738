#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact running sum. Partials follow Shewchuk's non-overlapping expansion;
// value() is the correctly rounded total. +inf absorbs everything.
class ExactAccumulator {
 public:
  void add(double x);
  // a*b is split exactly with fma before accumulation.
  void add_product(double a, double b);
  double value() const;
  bool infinite() const { return inf_; }

 private:
  std::vector<double> partials_;
  bool inf_ = false;
  bool nan_ = false;
};

double exact_sum(std::span<const double> terms);
double exact_dot(std::span<const double> a, std::span<const double> b);

}  // namespace mo
