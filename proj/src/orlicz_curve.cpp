#include "mo/orlicz_curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mo/errors.hpp"

namespace mo {

namespace {

void require_nonneg(double u, const char* what) {
  if (std::isnan(u) || u < 0.0) throw DomainError(std::string(what) + " must be >= 0");
}

std::string num(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

OrliczCurve OrliczCurve::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("Power exponent must be in (1, inf)");
  OrliczCurve c;
  c.kind_ = Kind::Power;
  c.p_ = p;
  c.q_ = p / (p - 1.0);
  c.finish();
  return c;
}

OrliczCurve OrliczCurve::linear(double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope)) throw DomainError("Linear slope must be positive and finite");
  OrliczCurve c;
  c.kind_ = Kind::Linear;
  c.c_ = slope;
  c.finish();
  return c;
}

OrliczCurve OrliczCurve::indicator(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("Indicator end must be positive and finite");
  OrliczCurve c;
  c.kind_ = Kind::Indicator;
  c.c_ = b;
  c.finish();
  return c;
}

OrliczCurve OrliczCurve::piecewise_linear(std::vector<double> bp, std::vector<double> sl) {
  if (sl.empty() || bp.size() != sl.size() + 1)
    throw DomainError("piecewise linear curve needs k slopes and k+1 breakpoints");
  if (bp[0] != 0.0) throw DomainError("first breakpoint must be 0");
  for (std::size_t j = 1; j < bp.size(); ++j) {
    if (!(bp[j] > bp[j - 1])) throw DomainError("breakpoints must increase strictly");
    if (std::isinf(bp[j]) && j + 1 != bp.size()) throw DomainError("only the last breakpoint may be inf");
    if (std::isnan(bp[j])) throw DomainError("breakpoint is NaN");
  }
  for (std::size_t j = 0; j < sl.size(); ++j) {
    if (!std::isfinite(sl[j]) || sl[j] < 0.0) throw DomainError("slopes must be finite and >= 0");
    if (j > 0 && !(sl[j] > sl[j - 1])) throw DomainError("slopes must increase strictly");
  }
  if (std::isinf(bp.back()) && sl.back() == 0.0) throw DomainError("curve is identically zero");
  OrliczCurve c;
  c.kind_ = Kind::PiecewiseLinear;
  c.bp_ = std::move(bp);
  c.sl_ = std::move(sl);
  c.finish();
  return c;
}

void OrliczCurve::finish() {
  switch (kind_) {
    case Kind::Power:
      params_ = {0.0, kInf, 0.0, kInf};
      break;
    case Kind::Linear:
      params_ = {0.0, kInf, kInf, kInf};
      break;
    case Kind::Indicator:
      params_ = {c_, c_, c_, 0.0};
      break;
    case Kind::PiecewiseLinear: {
      const std::size_t k = sl_.size();
      cum_.assign(k + 1, 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        cum_[j + 1] = std::isinf(bp_[j + 1]) ? kInf : cum_[j] + sl_[j] * (bp_[j + 1] - bp_[j]);
      }
      params_.a = sl_[0] == 0.0 ? bp_[1] : 0.0;
      params_.d = bp_[1];
      params_.b = bp_.back();
      params_.value_at_b = cum_.back();
      break;
    }
  }
}

double OrliczCurve::eval(double u) const {
  require_nonneg(u, "argument");
  switch (kind_) {
    case Kind::Power:
      return std::pow(u, p_) / p_;
    case Kind::Linear:
      return c_ * u;
    case Kind::Indicator:
      return u <= c_ ? 0.0 : kInf;
    case Kind::PiecewiseLinear: {
      const double b = bp_.back();
      if (u > b) return kInf;
      if (u == b) return cum_.back();
      const auto j = static_cast<std::size_t>(std::upper_bound(bp_.begin(), bp_.end(), u) - bp_.begin()) - 1;
      return cum_[j] + sl_[j] * (u - bp_[j]);
    }
  }
  return kInf;
}

OrliczCurve OrliczCurve::conjugate() const {
  switch (kind_) {
    case Kind::Power: {
      OrliczCurve c;
      c.kind_ = Kind::Power;
      c.p_ = q_;
      c.q_ = p_;
      c.finish();
      return c;
    }
    case Kind::Linear:
      return indicator(c_);
    case Kind::Indicator:
      return linear(c_);
    case Kind::PiecewiseLinear: {
      const std::size_t k = sl_.size();
      std::vector<double> bp{0.0};
      std::vector<double> sl;
      // psi has slope u_j on [s_j, s_{j+1}] (s_0 = 0); a zero first slope
      // leaves a degenerate first segment, which is skipped.
      for (std::size_t j = 0; j < k; ++j) {
        if (sl_[j] == 0.0) continue;
        sl.push_back(bp_[j]);
        bp.push_back(sl_[j]);
      }
      if (std::isfinite(bp_[k])) {
        bp.push_back(kInf);
        sl.push_back(bp_[k]);
      }
      return piecewise_linear(std::move(bp), std::move(sl));
    }
  }
  return *this;
}

double OrliczCurve::left_derivative(double u) const {
  if (std::isnan(u) || !(u > 0.0) || u > params_.b) throw DomainError("left derivative needs 0 < u <= b");
  switch (kind_) {
    case Kind::Power:
      return std::pow(u, p_ - 1.0);
    case Kind::Linear:
      return c_;
    case Kind::Indicator:
      return 0.0;
    case Kind::PiecewiseLinear: {
      if (std::isinf(u)) return sl_.back();
      const auto j = static_cast<std::size_t>(std::lower_bound(bp_.begin(), bp_.end(), u) - bp_.begin()) - 1;
      return sl_[j];
    }
  }
  return kInf;
}

double OrliczCurve::right_derivative(double u) const {
  require_nonneg(u, "argument");
  if (u >= params_.b) return kInf;
  switch (kind_) {
    case Kind::Power:
      return std::pow(u, p_ - 1.0);
    case Kind::Linear:
      return c_;
    case Kind::Indicator:
      return 0.0;
    case Kind::PiecewiseLinear: {
      const auto j = static_cast<std::size_t>(std::upper_bound(bp_.begin(), bp_.end(), u) - bp_.begin()) - 1;
      return sl_[j];
    }
  }
  return kInf;
}

Subdifferential OrliczCurve::subdifferential(double u) const {
  require_nonneg(u, "argument");
  const double b = params_.b;
  if (u == 0.0) return {false, 0.0, right_derivative(0.0), 1};
  if (u < b) return {false, left_derivative(u), right_derivative(u), 2};
  if (u == b) {
    // u = b = inf is read as phi(inf) = inf
    if (std::isfinite(b) && std::isfinite(params_.value_at_b)) return {false, left_derivative(u), kInf, 3};
    return {true, 0.0, 0.0, 4};
  }
  return {true, 0.0, 0.0, 5};
}

double OrliczCurve::inverse(double s) const {
  require_nonneg(s, "level");
  if (std::isinf(s)) return params_.b;
  switch (kind_) {
    case Kind::Power:
      return std::pow(p_ * s, 1.0 / p_);
    case Kind::Linear:
      return s / c_;
    case Kind::Indicator:
      return c_;
    case Kind::PiecewiseLinear: {
      if (s >= cum_.back()) return bp_.back();
      const auto j = static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin()) - 1;
      return std::min(bp_[j] + (s - cum_[j]) / sl_[j], bp_[j + 1]);
    }
  }
  return params_.b;
}

double OrliczCurve::asymptotic_slope() const {
  switch (kind_) {
    case Kind::Linear:
      return c_;
    case Kind::PiecewiseLinear:
      return std::isinf(bp_.back()) ? sl_.back() : kInf;
    default:
      return kInf;
  }
}

std::string OrliczCurve::describe() const {
  switch (kind_) {
    case Kind::Power:
      return "Power(" + num(p_) + ")";
    case Kind::Linear:
      return "Linear(" + num(c_) + ")";
    case Kind::Indicator:
      return "Indicator(" + num(c_) + ")";
    case Kind::PiecewiseLinear: {
      std::string s = "PiecewiseLinear(breakpoints=[";
      for (std::size_t j = 0; j < bp_.size(); ++j) s += (j ? "," : "") + num(bp_[j]);
      s += "], slopes=[";
      for (std::size_t j = 0; j < sl_.size(); ++j) s += (j ? "," : "") + num(sl_[j]);
      return s + "])";
    }
  }
  return "?";
}

bool OrliczCurve::operator==(const OrliczCurve& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Power:
      return p_ == o.p_ && q_ == o.q_;
    case Kind::Linear:
    case Kind::Indicator:
      return c_ == o.c_;
    case Kind::PiecewiseLinear:
      return bp_ == o.bp_ && sl_ == o.sl_;
  }
  return false;
}

double young_gap(const OrliczCurve& curve, const OrliczCurve& conj, double u, double v) {
  require_nonneg(u, "u");
  require_nonneg(v, "v");
  const double fu = curve.eval(u);
  const double gv = conj.eval(v);
  if (std::isinf(fu) || std::isinf(gv)) return kInf;
  ExactAccumulator acc;
  acc.add(fu);
  acc.add(gv);
  acc.add_product(-u, v);
  return acc.value();
}

double young_gap(const OrliczCurve& curve, double u, double v) {
  return young_gap(curve, curve.conjugate(), u, v);
}

double half_ratio_bound(const OrliczCurve& curve, double lo, double hi) {
  const CurveParams& pr = curve.params();
  if (std::isnan(lo) || std::isnan(hi) || !(lo <= hi)) throw PreconditionError("half_ratio_bound: need lo <= hi");
  if (!(lo > pr.d)) throw PreconditionError("half_ratio_bound: interval must lie above d");
  const bool hi_ok = hi < pr.b || (hi == pr.b && std::isfinite(pr.b) && std::isfinite(pr.value_at_b));
  if (!hi_ok) throw PreconditionError("half_ratio_bound: interval must lie inside the finite domain");
  auto ratio = [&](double u) { return 2.0 * curve.eval(0.5 * u) / curve.eval(u); };
  double sigma = 0.0;
  if (curve.kind() == OrliczCurve::Kind::Power) {
    sigma = std::pow(2.0, 1.0 - curve.p());
  } else {
    // 2phi(u/2)/phi(u) is linear-fractional between consecutive points of
    // {u_j} U {2u_j}, hence monotone there.
    std::vector<double> cand{lo, hi};
    for (double u : curve.breakpoints()) {
      if (u >= lo && u <= hi) cand.push_back(u);
      if (2.0 * u >= lo && 2.0 * u <= hi) cand.push_back(2.0 * u);
    }
    for (double u : cand) sigma = std::max(sigma, ratio(u));
  }
  if (!(sigma < 1.0)) throw PreconditionError("half_ratio_bound: ratio reaches 1 on the interval");
  return sigma;
}

bool finitecomp_check(const OrliczCurve& curve, const std::vector<double>& u_samples) {
  if (std::isinf(curve.params().b)) throw PreconditionError("finitecomp_check needs b < inf");
  const OrliczCurve psi = curve.conjugate();
  for (double u : u_samples) {
    if (!(u > 0.0)) throw DomainError("finitecomp_check samples must be > 0");
    if (std::isinf(curve.eval(psi.left_derivative(u)))) return false;
  }
  return true;
}

}  // namespace mo
