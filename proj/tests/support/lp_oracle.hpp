#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mo/interpolation.hpp"

namespace mo::testing {

// Dense tableau simplex for  max b.u  s.t.  A^T u <= c, u >= 0, with c >= 0
// so the slack basis is feasible. Bland's rule; fine for a few dozen rows.
inline double simplex_max(const std::vector<std::vector<double>>& At, const std::vector<double>& c,
                          const std::vector<double>& b) {
  const std::size_t rows = At.size(), cols = b.size();
  std::vector<std::vector<double>> T(rows + 1, std::vector<double>(cols + rows + 1, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols; ++k) T[r][k] = At[r][k];
    T[r][cols + r] = 1.0;
    T[r].back() = c[r];
    basis[r] = cols + r;
  }
  for (std::size_t k = 0; k < cols; ++k) T[rows][k] = -b[k];
  const double tiny = 1e-12;
  for (int it = 0; it < 10000; ++it) {
    std::size_t enter = cols + rows;
    for (std::size_t k = 0; k < cols + rows; ++k)
      if (T[rows][k] < -tiny) {
        enter = k;
        break;
      }
    if (enter == cols + rows) return T[rows].back();
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (T[r][enter] > tiny) {
        const double ratio = T[r].back() / T[r][enter];
        if (ratio < best - 1e-15 || (std::fabs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
          best = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) throw std::runtime_error("LP unbounded");
    const double piv = T[leave][enter];
    for (double& t : T[leave]) t /= piv;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == leave || T[r][enter] == 0.0) continue;
      const double f = T[r][enter];
      for (std::size_t k = 0; k < T[r].size(); ++k) T[r][k] -= f * T[leave][k];
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("LP iteration limit");
}

// min c + sum_Gamma v mu s  over  x = y + z,  w|y| <= c,  |z| <= s, z = 0 off Gamma.
// Solved through its dual so the slack basis starts feasible.
inline double lp_wsum_norm(const SumSpaceSpec& spec, const StepFunction& x) {
  const std::size_t n = x.size();
  const auto& mu = spec.grid->weights();
  // primal variables: c, then per Gamma cell (y+, y-, s)
  std::vector<double> cost{1.0};
  std::vector<std::size_t> gam = spec.gamma.indices();
  for (std::size_t i : gam) {
    cost.push_back(0.0);
    cost.push_back(0.0);
    cost.push_back(spec.v[i] * mu[i]);
  }
  std::vector<std::vector<double>> A;  // rows: constraints a.z >= rhs
  std::vector<double> rhs;
  auto row = [&] { return std::vector<double>(cost.size(), 0.0); };
  for (std::size_t k = 0; k < gam.size(); ++k) {
    const std::size_t i = gam[k];
    const std::size_t yp = 1 + 3 * k, ym = yp + 1, s = yp + 2;
    auto r1 = row();  // s + y >= x
    r1[s] = 1;
    r1[yp] = 1;
    r1[ym] = -1;
    A.push_back(r1);
    rhs.push_back(x[i]);
    auto r2 = row();  // s - y >= -x
    r2[s] = 1;
    r2[yp] = -1;
    r2[ym] = 1;
    A.push_back(r2);
    rhs.push_back(-x[i]);
    auto r3 = row();  // c - w y >= 0
    r3[0] = 1;
    r3[yp] = -spec.w[i];
    r3[ym] = spec.w[i];
    A.push_back(r3);
    rhs.push_back(0.0);
    auto r4 = row();  // c + w y >= 0
    r4[0] = 1;
    r4[yp] = spec.w[i];
    r4[ym] = -spec.w[i];
    A.push_back(r4);
    rhs.push_back(0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.gamma.contains(i)) continue;
    auto r = row();
    r[0] = 1;
    A.push_back(r);
    rhs.push_back(spec.w[i] * std::fabs(x[i]));
  }
  // dual: max rhs.u  s.t.  A^T u <= cost
  std::vector<std::vector<double>> At(cost.size(), std::vector<double>(A.size(), 0.0));
  for (std::size_t r = 0; r < A.size(); ++r)
    for (std::size_t k = 0; k < cost.size(); ++k) At[k][r] = A[r][k];
  return simplex_max(At, cost, rhs);
}

// Ternary search of the convex objective over c.
inline double ternary_wsum_norm(const SumSpaceSpec& spec, const StepFunction& x) {
  const auto& mu = spec.grid->weights();
  double c0 = 0.0, top = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::fabs(x[i]) * spec.w[i];
    if (!spec.gamma.contains(i)) c0 = std::max(c0, t);
    top = std::max(top, t);
  }
  auto g = [&](double c) {
    double s = c;
    for (std::size_t i : spec.gamma.indices()) s += spec.v[i] * mu[i] * std::max(std::fabs(x[i]) - c / spec.w[i], 0.0);
    return s;
  };
  double lo = c0, hi = std::max(top, c0);
  for (int it = 0; it < 300; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (g(m1) <= g(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min({g(lo), g(hi), g(c0)});
}

}  // namespace mo::testing
