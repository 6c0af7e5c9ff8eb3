#include "puredyn/time_reversal.hpp"

#include <bit>

#include "puredyn/errors.hpp"

namespace puredyn {

const char* to_string(TimeReversalKind k) {
  return k == TimeReversalKind::SpinFlip ? "rotated" : "kz";
}

TimeReversalKind time_reversal_from_string(const std::string& s) {
  if (s == "kz") return TimeReversalKind::ComplexConjugation;
  if (s == "rotated") return TimeReversalKind::SpinFlip;
  throw DomainError("unknown time reversal '" + s + "' (expected kz or rotated)");
}

TimeReversal::TimeReversal(Index dim) : kind_(TimeReversalKind::ComplexConjugation) {
  target_.resize(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) target_[static_cast<std::size_t>(i)] = i;
  sign_.assign(static_cast<std::size_t>(dim), 1.0);
}

TimeReversal::TimeReversal(TimeReversalKind kind, const SectorBasis& basis) : TimeReversal(static_cast<Index>(basis.dim())) {
  kind_ = kind;
  if (kind != TimeReversalKind::SpinFlip) return;
  // iσ_y|↑⟩ = −|↓⟩ and iσ_y|↓⟩ = |↑⟩.
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const SpinWord c = basis.config(i);
    target_[i] = static_cast<Index>(basis.index_of(basis.flip_all(c)));
    sign_[i] = (std::popcount(c) % 2 == 0) ? 1.0 : -1.0;
  }
}

PureState TimeReversal::apply(const PureState& psi) const {
  if (psi.dim() != dim()) throw DomainError("state dimension does not match time reversal");
  PureState out;
  out.amplitudes.resize(dim());
  for (Index i = 0; i < dim(); ++i) out.amplitudes[target(i)] = sign(i) * std::conj(psi.amplitudes[i]);
  out.recipe = psi.recipe;
  out.norm_tag = psi.norm_tag;
  return out;
}

HermitianOperator TimeReversal::transform(const HermitianOperator& h) const {
  if (h.dim() != dim()) throw DomainError("operator dimension does not match time reversal");
  const std::string tag = h.basis_tag();
  if (!h.is_sparse()) {
    RealMatrix m(dim(), dim());
    const RealMatrix& src = h.dense();
    for (Index j = 0; j < dim(); ++j)
      for (Index i = 0; i < dim(); ++i) m(target(i), target(j)) = sign(i) * sign(j) * src(i, j);
    return HermitianOperator::from_dense(std::move(m), tag, h.convention());
  }
  const CsrMatrix& a = h.csr();
  std::vector<MatrixEntry> entries;
  entries.reserve(a.val.size());
  for (Index r = 0; r < dim(); ++r)
    for (Index p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p)
      entries.push_back({target(r), target(a.col[p]), sign(r) * sign(a.col[p]) * a.val[p]});
  return HermitianOperator::from_csr(csr_from_entries(dim(), std::move(entries)), tag, h.convention());
}

namespace {

double transfer_trace(const Spectrum& spec, const std::vector<Index>& to, const std::vector<Index>& from, double tau) {
  // tr{Π_a U Π_b U†} = Σ_{z∈a, w∈b} |U_zw|².
  const RealMatrix& v = spec.vectors;
  ComplexMatrix rows(static_cast<Index>(to.size()), spec.dim());
  for (std::size_t i = 0; i < to.size(); ++i)
    for (Index k = 0; k < spec.dim(); ++k) rows(static_cast<Index>(i), k) = v(to[i], k) * std::polar(1.0, -spec.energies[k] * tau);
  RealMatrix cols(spec.dim(), static_cast<Index>(from.size()));
  for (std::size_t j = 0; j < from.size(); ++j) cols.col(static_cast<Index>(j)) = v.row(from[j]).transpose();
  return (rows * cols.cast<cplx>()).cwiseAbs2().sum();
}

}  // namespace

double symmetry_identity_residual(const Spectrum& spec, const Spectrum& spec_reversed, const CoarseObservable& obs,
                                  const TimeReversal& theta, int x, int y, double tau) {
  const double lhs = transfer_trace(spec, obs.members(x), obs.members(y), tau);
  const double rhs =
      transfer_trace(spec_reversed, obs.members(theta.map_label(y)), obs.members(theta.map_label(x)), tau);
  return std::abs(lhs - rhs);
}

}  // namespace puredyn
