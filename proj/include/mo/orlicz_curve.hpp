#pragma once

#include <string>
#include <vector>

#include "mo/numeric.hpp"

namespace mo {

// a = largest zero, d = end of the half-point linearity region, b = end of
// the finite domain. value_at_b is inf when b is inf.
struct CurveParams {
  double a = 0.0;
  double b = kInf;
  double d = 0.0;
  double value_at_b = kInf;
};

// Closed interval [lo, hi] (hi may be inf) or empty. case_id numbers the
// five branches: 1 at u=0, 2 inside (0,b), 3 at a finite b with finite
// value, 4 at b with infinite value, 5 beyond b.
struct Subdifferential {
  bool empty = false;
  double lo = 0.0;
  double hi = 0.0;
  int case_id = 0;
  bool contains(double v) const { return !empty && v >= lo && v <= hi; }
};

// Orlicz function from one of four families closed under conjugation:
//   Power(p)            u^p/p, 1 < p < inf
//   Linear(c)           c u
//   Indicator(b)        0 on [0,b], inf beyond
//   PiecewiseLinear     breakpoints 0=u0<...<uk (uk may be inf), slopes
//                       0 <= s1 < ... < sk; when uk is finite it is the end
//                       of the domain and the curve is left continuous there.
class OrliczCurve {
 public:
  enum class Kind { Power, Linear, Indicator, PiecewiseLinear };

  static OrliczCurve power(double p);
  static OrliczCurve linear(double c);
  static OrliczCurve indicator(double b);
  static OrliczCurve piecewise_linear(std::vector<double> breakpoints, std::vector<double> slopes);

  Kind kind() const { return kind_; }
  // Power exponent and its conjugate exponent.
  double p() const { return p_; }
  double q() const { return q_; }
  // Slope of Linear, domain end of Indicator.
  double scale() const { return c_; }
  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<double>& slopes() const { return sl_; }

  double eval(double u) const;
  const CurveParams& params() const { return params_; }
  OrliczCurve conjugate() const;
  double left_derivative(double u) const;
  double right_derivative(double u) const;
  Subdifferential subdifferential(double u) const;
  // sup{u >= 0 : phi(u) <= s}
  double inverse(double s) const;
  // lim phi(u)/u as u -> inf (inf when superlinear or domain is bounded)
  double asymptotic_slope() const;

  std::string describe() const;
  bool operator==(const OrliczCurve& o) const;

 private:
  OrliczCurve() = default;
  void finish();

  Kind kind_ = Kind::Linear;
  double p_ = 0.0, q_ = 0.0, c_ = 0.0;
  std::vector<double> bp_, sl_, cum_;
  CurveParams params_;
};

// phi(u) + psi(v) - uv with psi the conjugate; inf when either term is.
double young_gap(const OrliczCurve& curve, double u, double v);
double young_gap(const OrliczCurve& curve, const OrliczCurve& conj, double u, double v);

// sup of 2 phi(u/2)/phi(u) over [lo, hi]; must lie in (d, b) (or hi = b).
double half_ratio_bound(const OrliczCurve& curve, double lo, double hi);

// phi(psi'_-(u)) < inf for every sample; needs b < inf.
bool finitecomp_check(const OrliczCurve& curve, const std::vector<double>& u_samples);

}  // namespace mo
