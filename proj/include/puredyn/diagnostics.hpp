#pragma once

#include <span>
#include <vector>

#include "puredyn/operators.hpp"
#include "puredyn/propagation.hpp"
#include "puredyn/series.hpp"
#include "puredyn/spectral.hpp"
#include "puredyn/time_reversal.hpp"

namespace puredyn {

inline constexpr double kProbabilityFloor = 1e-8;

/// Amplitude rows permuted into the observable's bin order.
ComplexMatrix sort_rows(const ComplexMatrix& states, const CoarseObservable& obs);
ComplexVector sort_rows(const ComplexVector& state, const CoarseObservable& obs);

/// p_x per bin (rows, in bins() order) for each column of `states` (working-basis order).
RealMatrix bin_probabilities(const ComplexMatrix& states, const CoarseObservable& obs);
RealVector bin_probabilities(const ComplexVector& state, const CoarseObservable& obs);

/// e^{−iHτ} in bin order, with the per-time transition weights it induces.
class MacroPropagator {
 public:
  MacroPropagator(const Spectrum& spec, const CoarseObservable& obs, double tau);

  double tau() const { return tau_; }
  const CoarseObservable& observable() const { return *obs_; }
  const ComplexMatrix& matrix() const { return u_; }

  struct Step {
    std::vector<RealMatrix> weights;  // weights[t](x,y) = |Π_x U Π_y ψ_t|²
    RealMatrix after;                 // after(x,t) = |Π_x U ψ_t|²
    RealMatrix before;                // before(y,t) = |Π_y ψ_t|²
  };
  /// sorted_states columns must be in bin order (see sort_rows).
  Step step(const ComplexMatrix& sorted_states) const;

  /// Haar-average kernel P_{x|y} = tr{Π_x U Π_y U†}/V_y.
  RealMatrix haar_kernel() const;
  /// tr{Π_x U Π_y U†}.
  RealMatrix transfer_traces() const;

 private:
  const CoarseObservable* obs_;
  double tau_;
  ComplexMatrix u_;
};

struct ProbTable {
  double t1 = 0.0;
  double t2 = 0.0;
  RealVector first;        // p_{x1}(t1)
  RealMatrix joint;        // joint(x2, x1) = p(x2, x1)
  RealVector unmeasured;   // p(x2, no x1)
  RealVector marginal() const { return joint.rowwise().sum(); }
};

/// Measurements at absolute times t2 ≥ t1 ≥ 0; rows/columns follow bins() order.
ProbTable two_time_probs(const PureState& psi0, double t1, double t2, const Spectrum& spec, const CoarseObservable& obs);

/// Q(x2) = p(x2, no x1) − Σ_x1 p(x2, x1) for every x2 (bins() order).
RealVector quantum_terms(const ProbTable& table);
double quantum_term_Q(const PureState& psi0, double t1, double t2, int x2, const Spectrum& spec,
                      const CoarseObservable& obs);

/// q(x2,x0) for all x2, starting from Π_x0/V_x0 with interval durations dt1, dt2.
RealVector q_four_point_all(const Spectrum& spec, const CoarseObservable& obs, int x0, double dt1, double dt2);
double q_four_point(const Spectrum& spec, const CoarseObservable& obs, int x2, int x0, double dt1, double dt2);

/// Q_τ(t) = Σ_x |Σ_{y≠z} tr{Π_x U_τ Π_y ρ(t) Π_z U_τ†}| from a precomputed step.
DiagnosticSeries quantum_tau_series(const MacroPropagator::Step& step, std::span<const double> times, double tau);

/// Trapezoidal mean of the piecewise-linear series over [t_start, t_end].
double time_average(const DiagnosticSeries& s, double t_start, double t_end);

/// (v − v_eq)/(v(0) − v_eq).
DiagnosticSeries rescaled(const DiagnosticSeries& s, double equilibrium);

/// Per-seed first time the rescaled series enters |·| ≤ threshold and stays there; seed mean.
double thermalization_time(const std::vector<DiagnosticSeries>& rescaled_series, double threshold = 0.01);

/// ln(1/threshold) × first 1/e crossing time of a rescaled series.
double efold_thermalization_time(const DiagnosticSeries& rescaled_series, double threshold = 0.01);

/// tr{X(t) ρ} for a real symmetric ρ given in the eigenbasis.
DiagnosticSeries ensemble_expectation(const Spectrum& spec, const RealVector& lambda, const RealMatrix& rho_eig,
                                      std::span<const double> times);
/// Σ_k ρ_kk X_kk, the long-time value of ensemble_expectation.
double diagonal_ensemble_value(const Spectrum& spec, const RealVector& lambda, const RealMatrix& rho_eig);

struct RateTable {
  RealMatrix rates;              // R(x,y), bins() order; NaN column when p_y ≤ floor
  std::vector<bool> defined;     // per source bin
  RealVector volumes;            // V_x or effective volumes
};

/// R_{x,y} = W_xy / p_y from one time slice of a step.
RateTable rate_table(const RealMatrix& weights, const RealVector& before, const RealVector& volumes,
                     double floor = kProbabilityFloor);

/// |V_y R_{x,y} / (V_x R^TR_{y,x}) − 1| with R^TR_{y,x} = R_{θ(y),θ(x)}; NaN when a rate is undefined.
double ldb_residual(const RateTable& r, const CoarseObservable& obs, const TimeReversal& theta, int from, int to);

DiagnosticSeries ldb_series(const MacroPropagator::Step& step, std::span<const double> times,
                            const CoarseObservable& obs, const TimeReversal& theta, int from, int to,
                            const RealVector& volumes);

RealVector exact_volumes(const CoarseObservable& obs);

/// Ṽ_x = total_dim × mean of p_x over [t_start, t_end].
RealVector effective_volumes(const RealMatrix& probs, std::span<const double> times, double t_start, double t_end,
                             double total_dim);

/// S(t) = Σ_x p_x(ln V_x − ln p_x).
DiagnosticSeries entropy_series(const RealMatrix& probs, std::span<const double> times, const RealVector& volumes);
/// (S(t) − S(0))/(ln total_dim − S(0)).
DiagnosticSeries rescaled_entropy(const DiagnosticSeries& entropy, double total_dim);

/// J_{x,y} = 2 Im⟨Π_x ψ|H|Π_y ψ⟩, antisymmetric, bins() order.
RealMatrix currents(const ComplexVector& psi, const HermitianOperator& h, const CoarseObservable& obs);
/// true where the block Π_x H Π_y has a structural nonzero.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> block_adjacency(const HermitianOperator& h,
                                                                   const CoarseObservable& obs);

}  // namespace puredyn
