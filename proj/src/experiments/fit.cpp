#include "puredyn/experiments/fit.hpp"

#include <cmath>

#include "puredyn/errors.hpp"

namespace puredyn::experiments {

PowerLawFit fit_alpha(std::span<const double> dims, std::span<const double> values) {
  if (dims.size() != values.size()) throw DomainError("fit_alpha: dims and values differ in length");
  const std::size_t n = dims.size();
  if (n < 3) throw DomainError("fit_alpha: needs at least 3 points");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(dims[i] > 0) || !(values[i] > 0)) throw DomainError("fit_alpha: entries must be positive");
    sx += std::log(dims[i]);
    sy += std::log(values[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(dims[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(values[i]) - my);
  }
  if (sxx <= 0) throw DomainError("fit_alpha: all dimensions are equal");
  const double slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(values[i]) - (my + slope * (std::log(dims[i]) - mx));
    rss += r * r;
  }
  PowerLawFit f;
  f.alpha = -slope;
  f.intercept = my - slope * mx;
  f.alpha_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  f.points = n;
  return f;
}

}  // namespace puredyn::experiments
