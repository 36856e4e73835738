#include "mo/measure_grid.hpp"

#include <cmath>

#include "mo/errors.hpp"
#include "mo/numeric.hpp"

namespace mo {

std::shared_ptr<const MeasureGrid> MeasureGrid::create(std::vector<double> weights,
                                                       std::vector<std::string> ids) {
  if (weights.empty()) throw DomainError("grid needs at least one cell");
  if (ids.empty()) {
    ids.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) ids.push_back("c" + std::to_string(i));
  }
  if (ids.size() != weights.size()) throw DomainError("id count differs from weight count");
  std::shared_ptr<MeasureGrid> g(new MeasureGrid());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0.0) || !std::isfinite(w))
      throw DomainError("cell weight must be positive and finite (cell " + ids[i] + ")");
    if (!g->index_.emplace(ids[i], i).second) throw DomainError("duplicate cell id " + ids[i]);
  }
  g->total_ = exact_sum(weights);
  if (!std::isfinite(g->total_)) throw DomainError("total mass overflows");
  g->weights_ = std::move(weights);
  g->ids_ = std::move(ids);
  return g;
}

std::size_t MeasureGrid::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DomainError("unknown cell id " + id);
  return it->second;
}

void check_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b || a.get() != b.get()) throw GridMismatch();
}

// --- StepFunction ---

StepFunction::StepFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw DomainError("step function without grid");
  if (values_.size() != grid_->size()) throw DomainError("value count differs from cell count");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("step function values must be finite");
}

StepFunction StepFunction::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return StepFunction(std::move(grid), std::vector<double>(n, 0.0));
}

StepFunction StepFunction::constant(GridPtr grid, double c) {
  const std::size_t n = grid->size();
  return StepFunction(std::move(grid), std::vector<double>(n, c));
}

void StepFunction::set(std::size_t i, double v) {
  if (!std::isfinite(v)) throw DomainError("step function values must be finite");
  values_.at(i) = v;
}

bool StepFunction::is_zero() const {
  for (double v : values_)
    if (v != 0.0) return false;
  return true;
}

double StepFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::fmax(m, std::fabs(v));
  return m;
}

StepFunction StepFunction::operator+(const StepFunction& o) const {
  check_same_grid(grid_, o.grid_);
  std::vector<double> r(values_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = values_[i] + o.values_[i];
  return StepFunction(grid_, std::move(r));
}

StepFunction StepFunction::operator-(const StepFunction& o) const {
  check_same_grid(grid_, o.grid_);
  std::vector<double> r(values_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = values_[i] - o.values_[i];
  return StepFunction(grid_, std::move(r));
}

StepFunction StepFunction::operator-() const { return scaled(-1.0); }

StepFunction StepFunction::scaled(double s) const {
  std::vector<double> r(values_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = s * values_[i];
  return StepFunction(grid_, std::move(r));
}

// --- CellSet ---

CellSet CellSet::none(GridPtr grid) {
  CellSet s;
  s.mask_.assign(grid->size(), 0);
  s.grid_ = std::move(grid);
  return s;
}

CellSet CellSet::all(GridPtr grid) {
  CellSet s;
  s.mask_.assign(grid->size(), 1);
  s.grid_ = std::move(grid);
  return s;
}

CellSet CellSet::from_indices(GridPtr grid, const std::vector<std::size_t>& idx) {
  CellSet s = none(std::move(grid));
  for (std::size_t i : idx) s.insert(i);
  return s;
}

CellSet CellSet::from_ids(GridPtr grid, const std::vector<std::string>& ids) {
  CellSet s = none(grid);
  for (const auto& id : ids) s.insert(grid->index_of(id));
  return s;
}

CellSet CellSet::where(GridPtr grid, const std::function<bool(std::size_t)>& pred) {
  CellSet s = none(grid);
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (pred(i)) s.mask_[i] = 1;
  return s;
}

void CellSet::insert(std::size_t i) {
  if (i >= mask_.size()) throw DomainError("cell index out of range");
  mask_[i] = 1;
}

void CellSet::erase(std::size_t i) {
  if (i >= mask_.size()) throw DomainError("cell index out of range");
  mask_[i] = 0;
}

std::size_t CellSet::count() const {
  std::size_t c = 0;
  for (char m : mask_) c += m ? 1 : 0;
  return c;
}

std::vector<std::size_t> CellSet::indices() const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) r.push_back(i);
  return r;
}

CellSet CellSet::complement() const {
  CellSet s = *this;
  for (char& m : s.mask_) m = m ? 0 : 1;
  return s;
}

CellSet CellSet::operator|(const CellSet& o) const {
  check_same_grid(grid_, o.grid_);
  CellSet s = *this;
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = (mask_[i] || o.mask_[i]) ? 1 : 0;
  return s;
}

CellSet CellSet::operator&(const CellSet& o) const {
  check_same_grid(grid_, o.grid_);
  CellSet s = *this;
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = (mask_[i] && o.mask_[i]) ? 1 : 0;
  return s;
}

CellSet CellSet::operator-(const CellSet& o) const {
  check_same_grid(grid_, o.grid_);
  CellSet s = *this;
  for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = (mask_[i] && !o.mask_[i]) ? 1 : 0;
  return s;
}

// --- integration ---

double integrate(const MeasureGrid& grid, const StepFunction& x) {
  if (x.grid().get() != &grid) throw GridMismatch();
  return exact_dot(x.values(), grid.weights());
}

double integrate(const StepFunction& x) { return integrate(*x.grid(), x); }

double measure(const MeasureGrid& grid, const CellSet& s) {
  if (s.grid().get() != &grid) throw GridMismatch();
  ExactAccumulator acc;
  for (std::size_t i : s.indices()) acc.add(grid.weight(i));
  return acc.value();
}

double measure(const CellSet& s) { return measure(*s.grid(), s); }

StepFunction restrict(const StepFunction& x, const CellSet& s) {
  check_same_grid(x.grid(), s.grid());
  std::vector<double> r(x.size(), 0.0);
  for (std::size_t i : s.indices()) r[i] = x[i];
  return StepFunction(x.grid(), std::move(r));
}

GridPtr subgrid(const CellSet& s) {
  std::vector<double> w;
  std::vector<std::string> ids;
  for (std::size_t i : s.indices()) {
    w.push_back(s.grid()->weight(i));
    ids.push_back(s.grid()->id(i));
  }
  return MeasureGrid::create(std::move(w), std::move(ids));
}

GridPtr refine(const GridPtr& grid, std::size_t cell, std::size_t parts) {
  if (cell >= grid->size()) throw DomainError("refine: cell out of range");
  if (parts == 0) throw DomainError("refine: need at least one part");
  std::vector<double> w;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (i != cell) {
      w.push_back(grid->weight(i));
      ids.push_back(grid->id(i));
      continue;
    }
    for (std::size_t j = 0; j < parts; ++j) {
      w.push_back(grid->weight(i) / static_cast<double>(parts));
      ids.push_back(grid->id(i) + "." + std::to_string(j));
    }
  }
  return MeasureGrid::create(std::move(w), std::move(ids));
}

StepFunction rebind(const StepFunction& x, const GridPtr& grid) {
  if (x.grid() != grid && (x.grid()->weights() != grid->weights() || x.grid()->ids() != grid->ids()))
    throw GridMismatch();
  return StepFunction(grid, x.values());
}

double pairing(const StepFunction& f, const StepFunction& x) {
  check_same_grid(f.grid(), x.grid());
  ExactAccumulator acc;
  const auto& mu = x.grid()->weights();
  for (std::size_t k = 0; k < x.size(); ++k) acc.add_product(f[k] * x[k], mu[k]);
  return acc.value();
}

}  // namespace mo
