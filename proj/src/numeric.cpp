#include "mo/numeric.hpp"

#include <cmath>
#include <utility>

namespace mo {

void ExactAccumulator::add(double x) {
  if (std::isnan(x)) {
    nan_ = true;
    return;
  }
  if (std::isinf(x)) {
    if (x < 0) nan_ = true;
    inf_ = true;
    return;
  }
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  partials_.push_back(x);
}

void ExactAccumulator::add_product(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p)) {
    // 0*inf is 0 by convention.
    if ((a == 0.0 && std::isinf(b)) || (b == 0.0 && std::isinf(a))) return;
    add(p);
    return;
  }
  add(p);
  add(std::fma(a, b, -p));
}

double ExactAccumulator::value() const {
  if (nan_) return std::numeric_limits<double>::quiet_NaN();
  if (inf_) return kInf;
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
    const double y = lo * 2;
    const double x = hi + y;
    const double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

double exact_sum(std::span<const double> terms) {
  ExactAccumulator acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

double exact_dot(std::span<const double> a, std::span<const double> b) {
  ExactAccumulator acc;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) acc.add_product(a[i], b[i]);
  return acc.value();
}

}  // namespace mo
