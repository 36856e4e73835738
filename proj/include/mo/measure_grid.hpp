#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace mo {

// Finite measure space: cells with ids and strictly positive masses.
// Immutable; always handled through GridPtr so that derived objects share it.
class MeasureGrid {
 public:
  static std::shared_ptr<const MeasureGrid> create(std::vector<double> weights,
                                                   std::vector<std::string> ids = {});

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<double>& weights() const { return weights_; }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::size_t index_of(const std::string& id) const;
  double total_mass() const { return total_; }

 private:
  MeasureGrid() = default;
  std::vector<double> weights_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  double total_ = 0.0;
};

using GridPtr = std::shared_ptr<const MeasureGrid>;

// One finite value per cell.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(GridPtr grid, std::vector<double> values);
  static StepFunction zeros(GridPtr grid);
  static StepFunction constant(GridPtr grid, double c);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::size_t i) const { return values_.at(i); }
  const std::vector<double>& values() const { return values_; }
  void set(std::size_t i, double v);

  bool is_zero() const;
  double max_abs() const;

  StepFunction operator+(const StepFunction& o) const;
  StepFunction operator-(const StepFunction& o) const;
  StepFunction operator-() const;
  StepFunction scaled(double s) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Subset of cells, stored as a mask over the grid.
class CellSet {
 public:
  CellSet() = default;
  static CellSet none(GridPtr grid);
  static CellSet all(GridPtr grid);
  static CellSet from_indices(GridPtr grid, const std::vector<std::size_t>& idx);
  static CellSet from_ids(GridPtr grid, const std::vector<std::string>& ids);
  static CellSet where(GridPtr grid, const std::function<bool(std::size_t)>& pred);

  const GridPtr& grid() const { return grid_; }
  bool contains(std::size_t i) const { return mask_.at(i) != 0; }
  void insert(std::size_t i);
  void erase(std::size_t i);
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;

  CellSet complement() const;
  CellSet operator|(const CellSet& o) const;
  CellSet operator&(const CellSet& o) const;
  CellSet operator-(const CellSet& o) const;
  bool operator==(const CellSet& o) const { return grid_ == o.grid_ && mask_ == o.mask_; }

 private:
  GridPtr grid_;
  std::vector<char> mask_;
};

void check_same_grid(const GridPtr& a, const GridPtr& b);

double integrate(const MeasureGrid& grid, const StepFunction& x);
double integrate(const StepFunction& x);
// <f, x> = sum f_i x_i mu_i (compensated sum).
double pairing(const StepFunction& f, const StepFunction& x);
double measure(const MeasureGrid& grid, const CellSet& s);
double measure(const CellSet& s);
StepFunction restrict(const StepFunction& x, const CellSet& s);

// Grid made of the cells of s (ids and masses kept, order kept).
GridPtr subgrid(const CellSet& s);
// Splits one cell into `parts` cells of equal mass, ids "<id>.0", "<id>.1", ...
// The new cells take the place of the old one in the ordering.
GridPtr refine(const GridPtr& grid, std::size_t cell, std::size_t parts);
// Same values on a grid with identical weights and ids.
StepFunction rebind(const StepFunction& x, const GridPtr& grid);

}  // namespace mo
