#include "puredyn/series.hpp"

#include <cmath>

#include "puredyn/errors.hpp"

namespace puredyn {

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  if (n == 0) throw DomainError("time grid needs at least one interval");
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
  return g;
}

std::optional<double> first_crossing(const std::vector<double>& times, const std::vector<double>& values, double level) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) <= level) {
      if (i == 0) return times[0];
      const double a = std::abs(values[i - 1]);
      const double b = std::abs(values[i]);
      const double f = a == b ? 1.0 : (a - level) / (a - b);
      return times[i - 1] + f * (times[i] - times[i - 1]);
    }
  }
  return std::nullopt;
}

}  // namespace puredyn
