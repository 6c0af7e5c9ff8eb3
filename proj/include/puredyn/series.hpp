#pragma once

#include <optional>
#include <string>
#include <vector>

namespace puredyn {

/// Scalar diagnostic sampled on a time grid.
struct DiagnosticSeries {
  std::string name;
  double tau = 0.0;
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
};

/// n+1 equally spaced points on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

/// First time |value| drops to `level`, linearly interpolated between grid points.
std::optional<double> first_crossing(const std::vector<double>& times, const std::vector<double>& values, double level);

}  // namespace puredyn
