#pragma once

#include <cstdint>
#include <span>

#include "puredyn/diagnostics.hpp"

namespace puredyn {

inline constexpr double kLipschitzConstant = 2.0;

/// P_{x|y}(τ) = tr{Π_x U_τ Π_y U_τ†}/V_y.
double haar_average_P(const MacroPropagator& u, int x, int y);

struct ConcentrationReport {
  int x = 0;
  int y = 0;
  double tau = 0.0;
  double mean_P = 0.0;  // Haar average
  double sample_mean = 0.0;
  double sample_std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n_samples = 0;
  Index volume_y = 0;
  RealVector samples;

  /// Fraction of samples with |P/mean_P − 1| > eps.
  double exceedance(double eps) const;
};

/// P_{x|y}(ψ_y, τ) = |Π_x U_τ ψ_y|² for n Haar-random ψ_y in the y subspace.
ConcentrationReport sample_P(const MacroPropagator& u, int x, int y, std::size_t n, std::uint64_t seed);

/// ε² P² V_y / (18π³), the exponent of the concentration bound with Lipschitz constant 2.
double levy_exponent(double eps, double mean_P, double volume_y);
/// 4 exp(−levy_exponent) clamped to [0, 1].
double levy_bound(double eps, double mean_P, double volume_y);

/// Σ_x |p_x(t+τ) − Σ_y P_{x|y}(τ) p_y(t)| along a trajectory.
DiagnosticSeries markov_residual(const MacroPropagator::Step& step, const RealMatrix& kernel,
                                 std::span<const double> times, double tau);

}  // namespace puredyn
