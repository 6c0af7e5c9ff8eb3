#include "puredyn/markov_typicality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "puredyn/errors.hpp"
#include "puredyn/kernels.hpp"

namespace puredyn {

double haar_average_P(const MacroPropagator& u, int x, int y) {
  const auto& obs = u.observable();
  const Index bx = obs.require_bin(x);
  const Index by = obs.require_bin(y);
  const auto& off = obs.offsets();
  const double t = u.matrix().block(off[bx], off[by], off[bx + 1] - off[bx], off[by + 1] - off[by]).cwiseAbs2().sum();
  return t / static_cast<double>(obs.volume_at(by));
}

double ConcentrationReport::exceedance(double eps) const {
  if (samples.size() == 0) return 0.0;
  Index count = 0;
  for (Index i = 0; i < samples.size(); ++i)
    if (std::abs(samples[i] / mean_P - 1.0) > eps) ++count;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

ConcentrationReport sample_P(const MacroPropagator& u, int x, int y, std::size_t n, std::uint64_t seed) {
  if (n < 30) throw DomainError("concentration sampling needs at least 30 samples");
  const auto& obs = u.observable();
  const Index bx = obs.require_bin(x);
  const Index by = obs.require_bin(y);
  const auto& off = obs.offsets();
  const ComplexMatrix block = u.matrix().block(off[bx], off[by], off[bx + 1] - off[bx], off[by + 1] - off[by]);
  ConcentrationReport r;
  r.x = x;
  r.y = y;
  r.tau = u.tau();
  r.mean_P = haar_average_P(u, x, y);
  r.n_samples = n;
  r.volume_y = obs.volume_at(by);
  r.samples = kernels::haar_quadratic_samples(block, n, seed);
  r.sample_mean = r.samples.mean();
  r.sample_std = n > 1 ? std::sqrt((r.samples.array() - r.sample_mean).square().sum() / static_cast<double>(n - 1)) : 0.0;
  r.min = r.samples.minCoeff();
  r.max = r.samples.maxCoeff();
  return r;
}

double levy_exponent(double eps, double mean_P, double volume_y) {
  if (!(eps > 0.0)) throw DomainError("concentration bound needs eps > 0");
  return eps * eps * mean_P * mean_P * volume_y / (18.0 * std::pow(std::numbers::pi, 3));
}

double levy_bound(double eps, double mean_P, double volume_y) {
  return std::clamp(4.0 * std::exp(-levy_exponent(eps, mean_P, volume_y)), 0.0, 1.0);
}

DiagnosticSeries markov_residual(const MacroPropagator::Step& step, const RealMatrix& kernel,
                                 std::span<const double> times, double tau) {
  DiagnosticSeries s;
  s.name = "markov_residual";
  s.tau = tau;
  s.times.assign(times.begin(), times.end());
  s.values.resize(times.size());
  for (std::size_t t = 0; t < times.size(); ++t) {
    const Index c = static_cast<Index>(t);
    s.values[t] = (step.after.col(c) - kernel * step.before.col(c)).cwiseAbs().sum();
  }
  return s;
}

}  // namespace puredyn
