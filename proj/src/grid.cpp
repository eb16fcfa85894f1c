#include "skm/grid.hpp"

#include <cmath>
#include <numbers>

namespace skm {

SamplingGrid::SamplingGrid(std::size_t n_points, double spacing) : n_(n_points), dx_(spacing) {
  if (n_points < 8) throw ParameterError("SamplingGrid: n_points must be >= 8");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ParameterError("SamplingGrid: spacing must be positive and finite");
}

double SamplingGrid::frequency_spacing() const {
  return 2.0 * std::numbers::pi / extent();
}

double SamplingGrid::frequency(std::size_t i) const {
  const auto n = static_cast<long>(n_);
  long k = static_cast<long>(i);
  if (k >= (n + 1) / 2) k -= n;
  return static_cast<double>(k) * frequency_spacing();
}

void require_same_grid(const SamplingGrid& a, const SamplingGrid& b, const char* what) {
  if (!(a == b)) throw ParameterError(std::string(what) + ": grid mismatch");
}

}  // namespace skm
