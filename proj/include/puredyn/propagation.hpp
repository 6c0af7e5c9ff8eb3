#pragma once

#include <span>
#include <string>
#include <vector>

#include "puredyn/operators.hpp"
#include "puredyn/spectral.hpp"
#include "puredyn/types.hpp"

namespace puredyn {

/// Normalized amplitude vector with a description of how it was prepared.
struct PureState {
  ComplexVector amplitudes;
  std::string recipe;
  double norm_tag = 1.0;

  Index dim() const { return amplitudes.size(); }
  /// Rescale to unit norm and record the verified norm.
  void normalize();
};

/// Throws NumericalError for non-finite amplitudes or a norm off by more than tol.
void check_state(const PureState& s, double tol = 1e-10);

enum class PropagationMode { ExactEigenbasis, Krylov };

struct PropagatorConfig {
  PropagationMode mode = PropagationMode::ExactEigenbasis;
  int krylov_dim = 30;
  double step_tol = 1e-10;
  double max_substep = 1e300;
};

class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual PureState evolve(const PureState& psi, double t) const = 0;
  std::vector<PureState> evolve_batch(std::span<const PureState> states, double t) const;
};

/// e^{−iHt} through phases in a stored eigenbasis.
class ExactPropagator : public Propagator {
 public:
  explicit ExactPropagator(const Spectrum& spec) : spec_(&spec) {}
  PureState evolve(const PureState& psi, double t) const override;

  /// Columns ψ(t_j) for all grid times, computed with one product.
  ComplexMatrix trajectory(const PureState& psi, std::span<const double> times) const;
  /// Dense V e^{−iEt} Vᵀ.
  ComplexMatrix evolution_operator(double t) const;

  const Spectrum& spectrum() const { return *spec_; }

 private:
  const Spectrum* spec_;
};

/// Lanczos stepping with a posteriori error control.
class KrylovPropagator : public Propagator {
 public:
  KrylovPropagator(const HermitianOperator& h, PropagatorConfig cfg = {});
  PureState evolve(const PureState& psi, double t) const override;

  struct Stats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t breakdowns = 0;
  };
  const Stats& last_stats() const { return stats_; }

 private:
  const HermitianOperator* h_;
  PropagatorConfig cfg_;
  mutable Stats stats_;
};

}  // namespace puredyn
