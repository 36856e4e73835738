#pragma once

#include <optional>
#include <vector>

#include "mo/measure_grid.hpp"
#include "mo/orlicz_curve.hpp"

namespace mo {

// One Orlicz curve per grid cell.
class MusielakField {
 public:
  MusielakField(GridPtr grid, std::vector<OrliczCurve> curves);
  static MusielakField constant(GridPtr grid, const OrliczCurve& curve);
  // p = 1 gives Linear(1), 1 < p < inf gives Power(p), p = inf gives Indicator(1).
  static MusielakField nakano(GridPtr grid, const std::vector<double>& exponents);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return curves_.size(); }
  const OrliczCurve& curve(std::size_t i) const { return curves_.at(i); }
  const std::vector<OrliczCurve>& curves() const { return curves_; }
  const CurveParams& params(std::size_t i) const { return curves_.at(i).params(); }

 private:
  GridPtr grid_;
  std::vector<OrliczCurve> curves_;
};

struct Partition {
  CellSet omega_inf;   // a = b
  CellSet omega_1;     // d = b = inf
  CellSet omega_1inf;  // d = b < inf
  CellSet remainder;   // d < b
};

struct WeightPair {
  StepFunction v;  // 1/b, 0 where b = inf
  StepFunction w;  // slope of the initial linear piece on omega_1 and omega_1inf, else 0
};

double modular(const MusielakField& field, const StepFunction& x);
double luxemburg_norm(const MusielakField& field, const StepFunction& x, double tol = 1e-10);
MusielakField conjugate_field(const MusielakField& field);
double amemiya_norm(const MusielakField& field, const StepFunction& x, double tol = 1e-10);

struct OracleEffort {
  int max_sweeps = 400;
  int line_iterations = 90;
};

struct OracleResult {
  double value = 0.0;
  bool approximate = false;
  int sweeps = 0;
  // Modular-feasible point attaining value.
  std::vector<double> y;
};

// sup{ sum x y mu : modular(field, y) <= 1 }, a certified lower bound.
OracleResult orlicz_norm_sup_oracle(const MusielakField& field, const StepFunction& x,
                                    const OracleEffort& effort = {});

Partition partition(const MusielakField& field);
WeightPair weights(const MusielakField& field);

enum class DecompositionFormula { LuxemburgSplit, ClosedForm };

struct DecompositionResult {
  double value = 0.0;
  DecompositionFormula formula = DecompositionFormula::LuxemburgSplit;
  double split_value = 0.0;               // max{ |x|v on omega_inf, luxemburg on the rest }
  std::optional<double> closed_form;      // present when the remainder is empty
};

DecompositionResult decomposition_norm(const MusielakField& field, const StepFunction& x, double tol = 1e-10);

bool finite_elements_nontrivial(const MusielakField& field);
std::vector<CellSet> bounded_level_sets(const MusielakField& field, double u);

// modular at b_M; inf as soon as one cell has b = inf.
double modular_at_b(const MusielakField& field);

MusielakField restrict_field(const MusielakField& field, const CellSet& cells);
// Same curve on every part of the split cell.
MusielakField refine_field(const MusielakField& field, std::size_t cell, std::size_t parts);

}  // namespace mo
