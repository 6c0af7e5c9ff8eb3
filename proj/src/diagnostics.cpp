#include "puredyn/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "puredyn/errors.hpp"
#include "puredyn/kernels.hpp"

namespace puredyn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

DiagnosticSeries make_series(std::string name, std::span<const double> times, double tau = 0.0) {
  DiagnosticSeries s;
  s.name = std::move(name);
  s.tau = tau;
  s.times.assign(times.begin(), times.end());
  s.values.assign(times.size(), 0.0);
  return s;
}

}  // namespace

ComplexMatrix sort_rows(const ComplexMatrix& states, const CoarseObservable& obs) {
  const auto& order = obs.order();
  ComplexMatrix out(states.rows(), states.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.row(static_cast<Index>(i)) = states.row(order[i]);
  return out;
}

ComplexVector sort_rows(const ComplexVector& state, const CoarseObservable& obs) {
  const auto& order = obs.order();
  ComplexVector out(state.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[static_cast<Index>(i)] = state[order[i]];
  return out;
}

RealMatrix bin_probabilities(const ComplexMatrix& states, const CoarseObservable& obs) {
  const Index m = obs.macrostate_count();
  RealMatrix p = RealMatrix::Zero(m, states.cols());
  const auto& bin = obs.bin_of_state();
  for (Index t = 0; t < states.cols(); ++t)
    for (Index i = 0; i < states.rows(); ++i) p(bin[static_cast<std::size_t>(i)], t) += std::norm(states(i, t));
  return p;
}

RealVector bin_probabilities(const ComplexVector& state, const CoarseObservable& obs) {
  return bin_probabilities(ComplexMatrix(state), obs).col(0);
}

MacroPropagator::MacroPropagator(const Spectrum& spec, const CoarseObservable& obs, double tau)
    : obs_(&obs), tau_(tau) {
  if (spec.dim() != obs.dim()) throw DomainError("spectrum and observable dimensions differ");
  const auto& order = obs.order();
  RealMatrix vs(spec.dim(), spec.dim());
  for (std::size_t i = 0; i < order.size(); ++i) vs.row(static_cast<Index>(i)) = spec.vectors.row(order[i]);
  const RealVector c = (spec.energies * tau).array().cos();
  const RealVector s = (spec.energies * tau).array().sin();
  u_.resize(spec.dim(), spec.dim());
  u_.real() = vs * c.asDiagonal() * vs.transpose();
  u_.imag() = -(vs * s.asDiagonal() * vs.transpose());
}

MacroPropagator::Step MacroPropagator::step(const ComplexMatrix& sorted_states) const {
  Step s;
  const auto& off = obs_->offsets();
  kernels::transition_weights(u_, sorted_states, off, s.weights, s.after);
  const Index m = obs_->macrostate_count();
  s.before.resize(m, sorted_states.cols());
  for (Index t = 0; t < sorted_states.cols(); ++t)
    for (Index y = 0; y < m; ++y)
      s.before(y, t) = sorted_states.col(t).segment(off[y], off[y + 1] - off[y]).squaredNorm();
  return s;
}

RealMatrix MacroPropagator::transfer_traces() const {
  const auto& off = obs_->offsets();
  const Index m = obs_->macrostate_count();
  const RealMatrix a2 = u_.cwiseAbs2();
  RealMatrix t(m, m);
  for (Index x = 0; x < m; ++x)
    for (Index y = 0; y < m; ++y) t(x, y) = a2.block(off[x], off[y], off[x + 1] - off[x], off[y + 1] - off[y]).sum();
  return t;
}

RealMatrix MacroPropagator::haar_kernel() const {
  RealMatrix t = transfer_traces();
  for (Index y = 0; y < t.cols(); ++y) t.col(y) /= static_cast<double>(obs_->volume_at(y));
  return t;
}

ProbTable two_time_probs(const PureState& psi0, double t1, double t2, const Spectrum& spec, const CoarseObservable& obs) {
  if (!(t1 >= 0.0) || !(t2 >= t1)) throw DomainError("two-time probabilities need t2 >= t1 >= 0");
  const ExactPropagator prop(spec);
  const PureState psi1 = prop.evolve(psi0, t1);
  const Index m = obs.macrostate_count();
  ProbTable tab;
  tab.t1 = t1;
  tab.t2 = t2;
  tab.first = bin_probabilities(psi1.amplitudes, obs);
  tab.unmeasured = bin_probabilities(prop.evolve(psi1, t2 - t1).amplitudes, obs);
  tab.joint.resize(m, m);
  for (Index b = 0; b < m; ++b) {
    PureState projected;
    projected.amplitudes = ComplexVector::Zero(psi1.dim());
    for (Index i : obs.members(obs.bins()[static_cast<std::size_t>(b)])) projected.amplitudes[i] = psi1.amplitudes[i];
    if (projected.amplitudes.squaredNorm() == 0.0) {
      tab.joint.col(b).setZero();
      continue;
    }
    // Evolve the normalized projection and restore its weight afterwards.
    const double w = projected.amplitudes.squaredNorm();
    projected.amplitudes /= std::sqrt(w);
    tab.joint.col(b) = w * bin_probabilities(prop.evolve(projected, t2 - t1).amplitudes, obs);
  }
  return tab;
}

RealVector quantum_terms(const ProbTable& table) { return table.unmeasured - table.marginal(); }

double quantum_term_Q(const PureState& psi0, double t1, double t2, int x2, const Spectrum& spec,
                      const CoarseObservable& obs) {
  const Index b = obs.require_bin(x2);
  return quantum_terms(two_time_probs(psi0, t1, t2, spec, obs))[b];
}

RealVector q_four_point_all(const Spectrum& spec, const CoarseObservable& obs, int x0, double dt1, double dt2) {
  const Index b0 = obs.require_bin(x0);
  const auto& off = obs.offsets();
  const Index m = obs.macrostate_count();
  const MacroPropagator u1(spec, obs, dt1);
  const MacroPropagator u2(spec, obs, dt2);
  const Index v0 = obs.volume_at(b0);
  const ComplexMatrix a = u1.matrix().middleCols(off[b0], v0);
  const RealMatrix full = (u2.matrix() * a).cwiseAbs2();
  RealMatrix diag = RealMatrix::Zero(full.rows(), full.cols());
  for (Index x1 = 0; x1 < m; ++x1) {
    const Index v1 = off[x1 + 1] - off[x1];
    if (v1 == 0) continue;
    diag += (u2.matrix().middleCols(off[x1], v1) * a.middleRows(off[x1], v1)).cwiseAbs2();
  }
  RealVector q(m);
  for (Index x2 = 0; x2 < m; ++x2) {
    const Index v2 = off[x2 + 1] - off[x2];
    q[x2] = (full.middleRows(off[x2], v2).sum() - diag.middleRows(off[x2], v2).sum()) / static_cast<double>(v0);
  }
  return q;
}

double q_four_point(const Spectrum& spec, const CoarseObservable& obs, int x2, int x0, double dt1, double dt2) {
  const Index b2 = obs.require_bin(x2);
  return q_four_point_all(spec, obs, x0, dt1, dt2)[b2];
}

DiagnosticSeries quantum_tau_series(const MacroPropagator::Step& step, std::span<const double> times, double tau) {
  if (!(tau > 0.0)) throw DomainError("Q_tau needs tau > 0");
  DiagnosticSeries s = make_series("Q_tau", times, tau);
  for (std::size_t t = 0; t < times.size(); ++t) {
    const RealVector diag = step.weights[t].rowwise().sum();
    s.values[t] = (step.after.col(static_cast<Index>(t)) - diag).cwiseAbs().sum();
  }
  return s;
}

double time_average(const DiagnosticSeries& s, double t_start, double t_end) {
  if (!(t_end > t_start)) throw DomainError("time-average window is empty");
  if (s.times.empty() || t_start < s.times.front() - 1e-12 || t_end > s.times.back() + 1e-12)
    throw DomainError("time-average window outside the series");
  auto value_at = [&](double t) {
    auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.begin()) return s.values.front();
    if (it == s.times.end()) return s.values.back();
    const std::size_t i = static_cast<std::size_t>(it - s.times.begin());
    const double f = (t - s.times[i - 1]) / (s.times[i] - s.times[i - 1]);
    return s.values[i - 1] + f * (s.values[i] - s.values[i - 1]);
  };
  std::vector<double> ts{t_start};
  for (double t : s.times)
    if (t > t_start && t < t_end) ts.push_back(t);
  ts.push_back(t_end);
  double integral = 0.0;
  double prev = value_at(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double cur = value_at(ts[i]);
    integral += 0.5 * (prev + cur) * (ts[i] - ts[i - 1]);
    prev = cur;
  }
  return integral / (t_end - t_start);
}

DiagnosticSeries rescaled(const DiagnosticSeries& s, double equilibrium) {
  DiagnosticSeries r = s;
  const double span = s.values.front() - equilibrium;
  for (double& v : r.values) v = span != 0.0 ? (v - equilibrium) / span : 0.0;
  return r;
}

double thermalization_time(const std::vector<DiagnosticSeries>& rescaled_series, double threshold) {
  if (rescaled_series.empty()) throw DomainError("thermalization time needs at least one trajectory");
  double total = 0.0;
  for (const auto& s : rescaled_series) {
    std::size_t last_above = s.values.size();
    for (std::size_t i = s.values.size(); i-- > 0;)
      if (std::abs(s.values[i]) > threshold) {
        last_above = i;
        break;
      }
    if (last_above == s.values.size()) continue;  // held from t = 0
    if (last_above + 1 >= s.values.size())
      throw HorizonError("rescaled expectation is not held below " + std::to_string(threshold) +
                         " within the simulated horizon");
    const double a = std::abs(s.values[last_above]);
    const double b = std::abs(s.values[last_above + 1]);
    const double f = (a - threshold) / (a - b);
    total += s.times[last_above] + f * (s.times[last_above + 1] - s.times[last_above]);
  }
  return total / static_cast<double>(rescaled_series.size());
}

double efold_thermalization_time(const DiagnosticSeries& rescaled_series, double threshold) {
  const auto t = first_crossing(rescaled_series.times, rescaled_series.values, std::exp(-1.0));
  if (!t) throw HorizonError("rescaled expectation never decays to 1/e within the simulated horizon");
  return std::log(1.0 / threshold) * *t;
}

DiagnosticSeries ensemble_expectation(const Spectrum& spec, const RealVector& lambda, const RealMatrix& rho_eig,
                                      std::span<const double> times) {
  const RealMatrix x = to_eigenbasis(spec, lambda);
  const RealVector v = kernels::cosine_phase_sum(x.cwiseProduct(rho_eig), spec.energies, times);
  DiagnosticSeries s = make_series("expectation", times);
  s.values.assign(v.data(), v.data() + v.size());
  return s;
}

double diagonal_ensemble_value(const Spectrum& spec, const RealVector& lambda, const RealMatrix& rho_eig) {
  const RealVector xd = (spec.vectors.array().square().matrix().transpose() * lambda);
  return xd.dot(rho_eig.diagonal());
}

RateTable rate_table(const RealMatrix& weights, const RealVector& before, const RealVector& volumes, double floor) {
  RateTable r;
  r.rates = weights;
  r.volumes = volumes;
  r.defined.assign(static_cast<std::size_t>(weights.cols()), false);
  for (Index y = 0; y < weights.cols(); ++y) {
    if (before[y] > floor) {
      r.rates.col(y) /= before[y];
      r.defined[static_cast<std::size_t>(y)] = true;
    } else {
      r.rates.col(y).setConstant(kNaN);
    }
  }
  return r;
}

double ldb_residual(const RateTable& r, const CoarseObservable& obs, const TimeReversal& theta, int from, int to) {
  const Index y = obs.require_bin(from);
  const Index x = obs.require_bin(to);
  const Index ry = obs.require_bin(theta.map_label(from));
  const Index rx = obs.require_bin(theta.map_label(to));
  if (!r.defined[static_cast<std::size_t>(y)] || !r.defined[static_cast<std::size_t>(rx)]) return kNaN;
  // R^TR_{y,x} = R_{θ(y),θ(x)}: jump from θ(x) to θ(y).
  const double forward = r.volumes[y] * r.rates(x, y);
  const double backward = r.volumes[x] * r.rates(ry, rx);
  return std::abs(forward / backward - 1.0);
}

DiagnosticSeries ldb_series(const MacroPropagator::Step& step, std::span<const double> times,
                            const CoarseObservable& obs, const TimeReversal& theta, int from, int to,
                            const RealVector& volumes) {
  DiagnosticSeries s = make_series("ldb_delta", times);
  for (std::size_t t = 0; t < times.size(); ++t) {
    const RateTable r = rate_table(step.weights[t], step.before.col(static_cast<Index>(t)), volumes);
    s.values[t] = ldb_residual(r, obs, theta, from, to);
  }
  return s;
}

RealVector exact_volumes(const CoarseObservable& obs) {
  RealVector v(obs.macrostate_count());
  for (Index b = 0; b < v.size(); ++b) v[b] = static_cast<double>(obs.volume_at(b));
  return v;
}

RealVector effective_volumes(const RealMatrix& probs, std::span<const double> times, double t_start, double t_end,
                             double total_dim) {
  RealVector v(probs.rows());
  DiagnosticSeries s;
  s.times.assign(times.begin(), times.end());
  for (Index x = 0; x < probs.rows(); ++x) {
    s.values.resize(times.size());
    for (std::size_t t = 0; t < times.size(); ++t) s.values[t] = probs(x, static_cast<Index>(t));
    v[x] = total_dim * time_average(s, t_start, t_end);
  }
  return v;
}

DiagnosticSeries entropy_series(const RealMatrix& probs, std::span<const double> times, const RealVector& volumes) {
  DiagnosticSeries s = make_series("entropy", times);
  for (std::size_t t = 0; t < times.size(); ++t) {
    double e = 0.0;
    for (Index x = 0; x < probs.rows(); ++x) {
      const double p = probs(x, static_cast<Index>(t));
      if (p <= 0.0) continue;
      if (!(volumes[x] > 0.0)) throw DomainError("probability on a macrostate with zero volume");
      e += p * (std::log(volumes[x]) - std::log(p));
    }
    s.values[t] = e;
  }
  return s;
}

DiagnosticSeries rescaled_entropy(const DiagnosticSeries& entropy, double total_dim) {
  DiagnosticSeries r = entropy;
  r.name = "entropy_rescaled";
  const double s0 = entropy.values.front();
  const double rise = std::log(total_dim) - s0;
  for (double& v : r.values) v = (v - s0) / rise;
  return r;
}

RealMatrix currents(const ComplexVector& psi, const HermitianOperator& h, const CoarseObservable& obs) {
  const Index m = obs.macrostate_count();
  std::vector<ComplexVector> parts(static_cast<std::size_t>(m), ComplexVector::Zero(psi.size()));
  const auto& bin = obs.bin_of_state();
  for (Index i = 0; i < psi.size(); ++i) parts[static_cast<std::size_t>(bin[static_cast<std::size_t>(i)])][i] = psi[i];
  RealMatrix j = RealMatrix::Zero(m, m);
  ComplexVector hy;
  for (Index y = 0; y < m; ++y) {
    h.apply(parts[static_cast<std::size_t>(y)], hy);
    for (Index x = 0; x < m; ++x)
      if (x != y) j(x, y) = 2.0 * parts[static_cast<std::size_t>(x)].dot(hy).imag();
  }
  // Enforce exact antisymmetry against rounding.
  return 0.5 * (j - j.transpose());
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> block_adjacency(const HermitianOperator& h,
                                                                   const CoarseObservable& obs) {
  const Index m = obs.macrostate_count();
  const auto& bin = obs.bin_of_state();
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> a = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(m, m, false);
  if (h.is_sparse()) {
    const CsrMatrix& c = h.csr();
    for (Index r = 0; r < c.rows; ++r)
      for (Index p = c.row_ptr[r]; p < c.row_ptr[r + 1]; ++p)
        a(bin[static_cast<std::size_t>(r)], bin[static_cast<std::size_t>(c.col[p])]) = true;
  } else {
    const RealMatrix& d = h.dense();
    for (Index col = 0; col < d.cols(); ++col)
      for (Index r = 0; r < d.rows(); ++r)
        if (d(r, col) != 0.0) a(bin[static_cast<std::size_t>(r)], bin[static_cast<std::size_t>(col)]) = true;
  }
  return a;
}

}  // namespace puredyn
