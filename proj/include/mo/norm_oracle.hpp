#pragma once

#include <functional>

#include "mo/measure_grid.hpp"

namespace mo {

// Any norm on the step functions of one grid.
using NormOracle = std::function<double(const StepFunction&)>;

}  // namespace mo
