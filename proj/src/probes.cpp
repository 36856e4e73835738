#include "mo/probes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mo/errors.hpp"
#include "mo/numeric.hpp"
#include "mo/sampling.hpp"

namespace mo {

namespace {

struct Ball {
  const NormOracle& norm;
  GridPtr grid;
  std::vector<double> atom_scale;  // 1/|e_k|

  Ball(const NormOracle& n, GridPtr g) : norm(n), grid(std::move(g)), atom_scale(grid->size()) {
    for (std::size_t k = 0; k < grid->size(); ++k) {
      std::vector<double> e(grid->size(), 0.0);
      e[k] = 1.0;
      atom_scale[k] = 1.0 / norm(StepFunction(grid, e));
    }
  }

  // Empty StepFunction when v is zero or has no finite norm.
  StepFunction unit(std::vector<double> v) const {
    StepFunction y(grid, std::move(v));
    const double n = norm(y);
    if (!(n > 0.0) || !std::isfinite(n)) return {};
    return y.scaled(1.0 / n);
  }

  StepFunction atom(std::size_t k, double sign) const {
    std::vector<double> e(grid->size(), 0.0);
    e[k] = sign * atom_scale[k];
    return StepFunction(grid, e);
  }
};

double sgn(double t) { return t < 0 ? -1.0 : 1.0; }

void require_unit(double n, const char* what) {
  if (std::fabs(n - 1.0) > 1e-9) throw PreconditionError(std::string(what) + " must have norm one");
}

// Extremal points of the ball aligned with f: atoms, sign vertices and f itself.
std::vector<StepFunction> extremal(const Ball& ball, const StepFunction& f) {
  const std::size_t n = f.size();
  std::vector<StepFunction> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(ball.atom(k, sgn(f[k])));
  std::vector<double> s(n), supp(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = sgn(f[k]);
    if (f[k] != 0.0) supp[k] = sgn(f[k]);
  }
  for (auto v : {s, supp, f.values()}) {
    StepFunction u = ball.unit(v);
    if (u.size() != 0) out.push_back(std::move(u));
  }
  return out;
}

}  // namespace

SliceDiameterResult slice_diameter_lb(const NormOracle& primal, const NormOracle& dual, const Slice& s,
                                      std::size_t samples, std::uint64_t seed) {
  require_unit(dual(s.f), "slice functional");
  if (!(s.eps > 0.0)) throw PreconditionError("slice eps must be positive");
  const GridPtr& g = s.f.grid();
  const std::size_t n = g->size();
  const Ball ball(primal, g);
  auto in_slice = [&](const StepFunction& z) { return z.size() != 0 && pairing(s.f, z) > 1.0 - s.eps; };

  std::vector<StepFunction> members;
  for (StepFunction& z : extremal(ball, s.f))
    if (in_slice(z)) members.push_back(std::move(z));
  // best-aligned extremal point seeds the random candidates
  StepFunction centre = ball.unit(s.f.values());
  if (!members.empty()) {
    double best = -kInf;
    for (const StepFunction& z : members)
      if (pairing(s.f, z) > best) {
        best = pairing(s.f, z);
        centre = z;
      }
  }
  const std::size_t n_ext = members.size();

  std::vector<StepFunction> cand(samples);
  parallel_for(0, samples, [&](std::size_t i) {
    auto eng = sample_engine(seed, i);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    std::vector<double> v(n, 0.0);
    const double t = 2.0 * std::pow(unif(eng), 3.0);
    switch (i % 4) {
      case 0:
        for (std::size_t k = 0; k < n; ++k) v[k] = centre[k] + t * gauss(eng) * ball.atom_scale[k];
        break;
      case 1: {
        if (n_ext == 0) {
          for (std::size_t k = 0; k < n; ++k) v[k] = gauss(eng) * ball.atom_scale[k];
          break;
        }
        const StepFunction& p = members[eng() % n_ext];
        const StepFunction& q = members[eng() % n_ext];
        const double l = unif(eng);
        for (std::size_t k = 0; k < n; ++k)
          v[k] = (1.0 - l) * p[k] + l * q[k] + 0.1 * t * gauss(eng) * ball.atom_scale[k];
        break;
      }
      case 2:
        for (std::size_t k = 0; k < n; ++k)
          v[k] = (s.f[k] != 0.0 ? sgn(s.f[k]) * std::fabs(gauss(eng)) : gauss(eng)) * ball.atom_scale[k];
        break;
      default:
        for (std::size_t k = 0; k < n; ++k) v[k] = gauss(eng) * ball.atom_scale[k];
    }
    StepFunction z = ball.unit(std::move(v));
    if (in_slice(z)) cand[i] = std::move(z);
  });
  const std::size_t pool_cap = 512;
  for (std::size_t i = 0; i < samples && members.size() < n_ext + pool_cap; ++i)
    if (cand[i].size() != 0) members.push_back(std::move(cand[i]));
  if (members.empty()) throw PreconditionError("slice empty at sample budget");

  // pairs: extremal x all, and the first 64 members among themselves
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t m = members.size();
  const std::size_t head = std::max(n_ext, std::min<std::size_t>(m, 64));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < std::min(i, head); ++j) pairs.emplace_back(j, i);
  std::vector<double> d(pairs.size());
  parallel_for(0, pairs.size(), [&](std::size_t k) { d[k] = primal(members[pairs[k].first] - members[pairs[k].second]); });

  SliceDiameterResult out;
  out.members = m;
  out.samples = samples;
  out.seed = seed;
  out.a = members.front();
  out.b = members.front();
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (d[k] > out.max_distance) {
      out.max_distance = d[k];
      out.a = members[pairs[k].first];
      out.b = members[pairs[k].second];
    }
  out.lower_bound = std::min(out.max_distance, 2.0);
  return out;
}

RoughnessResult roughness_probe(const NormOracle& norm, const StepFunction& x, const std::vector<double>& h_scales,
                                std::size_t samples, std::uint64_t seed) {
  const double nx = norm(x);
  require_unit(nx, "x");
  if (h_scales.empty()) throw PreconditionError("roughness probe needs at least one scale");
  for (double s : h_scales)
    if (!(s > 0.0) || !std::isfinite(s)) throw PreconditionError("scales must be positive and finite");
  const GridPtr& g = x.grid();
  const std::size_t n = g->size();
  const Ball ball(norm, g);

  std::vector<StepFunction> dirs(samples);
  parallel_for(0, samples, [&](std::size_t i) {
    auto eng = sample_engine(seed, i);
    std::normal_distribution<double> gauss;
    std::vector<double> v(n, 0.0);
    switch (i % 4) {
      case 0: {
        const std::size_t k = (i / 4) % n;
        v[k] = (i / 4 / n) % 2 ? -1.0 : 1.0;
        break;
      }
      case 1: {
        bool any = false;
        for (std::size_t k = 0; k < n; ++k)
          if (x[k] == 0.0) {
            v[k] = gauss(eng) * ball.atom_scale[k];
            any = true;
          }
        if (!any)
          for (std::size_t k = 0; k < n; ++k) v[k] = gauss(eng) * ball.atom_scale[k];
        break;
      }
      case 2:
        for (std::size_t k = 0; k < n; ++k) {
          const double sign = (eng() & 1u) ? -1.0 : 1.0;
          v[k] = sign * (x[k] != 0.0 ? std::fabs(x[k]) : ball.atom_scale[k]);
        }
        break;
      default:
        for (std::size_t k = 0; k < n; ++k) v[k] = gauss(eng) * ball.atom_scale[k];
    }
    dirs[i] = ball.unit(std::move(v));
  });

  const std::size_t ns = h_scales.size();
  std::vector<double> q(samples * ns, -kInf);
  parallel_for(0, samples * ns, [&](std::size_t k) {
    const StepFunction& d = dirs[k / ns];
    if (d.size() == 0) return;
    const StepFunction h = d.scaled(h_scales[k % ns]);
    const double nh = norm(h);
    if (!(nh > 0.0)) return;
    q[k] = (norm(x + h) + norm(x - h) - 2.0 * nx) / nh;
  });
  RoughnessResult out;
  out.samples = samples;
  out.seed = seed;
  out.lower_bound = -kInf;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (q[k] > out.lower_bound) {
      out.lower_bound = q[k];
      out.scale = h_scales[k % ns];
      out.h = dirs[k / ns].scaled(out.scale);
    }
  return out;
}

DaugavetConditionResult daugavet_condition_probe(const NormOracle& primal, const NormOracle& dual,
                                                 const StepFunction& x, const StepFunction& f, double eps,
                                                 std::size_t budget, std::uint64_t seed) {
  require_unit(primal(x), "x");
  require_unit(dual(f), "f");
  check_same_grid(x.grid(), f.grid());
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  DaugavetConditionResult out;
  const GridPtr& g = x.grid();
  const std::size_t n = g->size();
  const Ball ball(primal, g);
  auto in_slice = [&](const StepFunction& y) { return y.size() != 0 && pairing(f, y) > 1.0 - eps; };
  auto value = [&](const StepFunction& y) {
    ++out.evaluations;
    return primal(x + y);
  };
  auto accept = [&](const StepFunction& y, double v) {
    if (v > 2.0 - eps) {
      out.found = true;
      out.y = y;
      out.pairing = pairing(f, y);
      out.norm_sum = v;
      return true;
    }
    return false;
  };

  std::vector<StepFunction> starts;
  if (in_slice(x)) starts.push_back(x);
  for (StepFunction& z : extremal(ball, f))
    if (in_slice(z)) starts.push_back(std::move(z));
  for (std::size_t k = 0; k < n; ++k) {
    // atoms aligned with x off the support of f
    StepFunction z = ball.atom(k, sgn(x[k]));
    if (in_slice(z)) starts.push_back(std::move(z));
  }
  std::vector<std::pair<StepFunction, double>> scored;
  for (const StepFunction& z : starts) {
    if (out.evaluations >= budget) return out;
    const double v = value(z);
    if (accept(z, v)) return out;
    scored.emplace_back(z, v);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  // coordinate ascent on |x + y| inside the slice
  auto eng = sample_engine(seed, 0);
  for (auto& [y, v] : scored) {
    double step = 0.5;
    while (step > 1e-6 && out.evaluations < budget) {
      bool moved = false;
      for (std::size_t k = 0; k < n && out.evaluations < budget; ++k) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> w = y.values();
          w[k] += dir * step * ball.atom_scale[k];
          StepFunction z = ball.unit(std::move(w));
          if (!in_slice(z)) continue;
          const double vz = value(z);
          if (accept(z, vz)) return out;
          if (vz > v) {
            y = std::move(z);
            v = vz;
            moved = true;
            break;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
  }
  // random restarts around the slice centre
  std::normal_distribution<double> gauss;
  const StepFunction centre = scored.empty() ? ball.unit(f.values()) : scored.front().first;
  while (out.evaluations < budget && centre.size() != 0) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = centre[k] + 0.5 * gauss(eng) * ball.atom_scale[k];
    StepFunction z = ball.unit(std::move(w));
    if (!in_slice(z)) {
      ++out.evaluations;  // count rejected draws so the loop ends
      continue;
    }
    if (accept(z, value(z))) return out;
  }
  return out;
}

}  // namespace mo
