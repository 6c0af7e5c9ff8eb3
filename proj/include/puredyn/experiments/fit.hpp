#pragma once

#include <span>

namespace puredyn::experiments {

/// Least-squares line through (ln D, ln value); alpha is minus the slope.
struct PowerLawFit {
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Throws DomainError for fewer than 3 points or non-positive entries.
PowerLawFit fit_alpha(std::span<const double> dims, std::span<const double> values);

}  // namespace puredyn::experiments
