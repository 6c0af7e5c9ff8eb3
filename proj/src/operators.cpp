#include "puredyn/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "puredyn/errors.hpp"

namespace puredyn {

const char* to_string(SpinConvention c) {
  switch (c) {
    case SpinConvention::HalfSpin: return "s=sigma/2";
    case SpinConvention::Pauli: return "sigma";
    default: return "none";
  }
}

CsrMatrix csr_from_entries(Index n, std::vector<MatrixEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const MatrixEntry& a, const MatrixEntry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    const auto& e = entries[i];
    double v = 0.0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].row == e.row && entries[j].col == e.col; ++j) v += entries[j].value;
    if (v != 0.0) {
      m.col.push_back(e.col);
      m.val.push_back(v);
      ++m.row_ptr[e.row + 1];
    }
    i = j;
  }
  for (Index r = 0; r < n; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

HermitianOperator HermitianOperator::from_csr(CsrMatrix m, std::string basis_tag, SpinConvention conv) {
  if (m.rows != m.cols) throw DomainError("operator must be square");
  HermitianOperator op;
  op.dim_ = m.rows;
  op.sparse_ = true;
  op.csr_ = std::move(m);
  op.basis_tag_ = std::move(basis_tag);
  op.convention_ = conv;
  op.hermitian_ = op.max_asymmetry() <= 1e-12;
  return op;
}

HermitianOperator HermitianOperator::from_dense(RealMatrix m, std::string basis_tag, SpinConvention conv) {
  if (m.rows() != m.cols()) throw DomainError("operator must be square");
  HermitianOperator op;
  op.dim_ = m.rows();
  op.sparse_ = false;
  op.dense_ = std::move(m);
  op.basis_tag_ = std::move(basis_tag);
  op.convention_ = conv;
  op.hermitian_ = op.max_asymmetry() <= 1e-12;
  return op;
}

HermitianOperator HermitianOperator::from_diagonal(const RealVector& diag, std::string basis_tag) {
  CsrMatrix m;
  m.rows = m.cols = diag.size();
  m.row_ptr.resize(static_cast<std::size_t>(diag.size()) + 1);
  m.row_ptr[0] = 0;
  for (Index i = 0; i < diag.size(); ++i) {
    if (diag[i] != 0.0) {
      m.col.push_back(i);
      m.val.push_back(diag[i]);
    }
    m.row_ptr[i + 1] = static_cast<Index>(m.val.size());
  }
  return from_csr(std::move(m), std::move(basis_tag));
}

RealMatrix HermitianOperator::to_dense() const {
  if (!sparse_) return dense_;
  RealMatrix d = RealMatrix::Zero(dim_, dim_);
  for (Index r = 0; r < dim_; ++r)
    for (Index p = csr_.row_ptr[r]; p < csr_.row_ptr[r + 1]; ++p) d(r, csr_.col[p]) += csr_.val[p];
  return d;
}

void HermitianOperator::apply(const ComplexVector& in, ComplexVector& out) const {
  if (in.size() != dim_) throw DomainError("vector dimension does not match operator");
  out.resize(dim_);
  if (sparse_)
    kernels::csr_apply(csr_, in.data(), out.data());
  else
    out.noalias() = dense_ * in;
}

void HermitianOperator::apply(const RealVector& in, RealVector& out) const {
  if (in.size() != dim_) throw DomainError("vector dimension does not match operator");
  out.resize(dim_);
  if (sparse_)
    kernels::csr_apply(csr_, in.data(), out.data());
  else
    out.noalias() = dense_ * in;
}

ComplexVector HermitianOperator::operator*(const ComplexVector& v) const {
  ComplexVector out;
  apply(v, out);
  return out;
}

double HermitianOperator::expectation(const ComplexVector& v) const {
  return v.dot(*this * v).real() / v.squaredNorm();
}

double HermitianOperator::trace() const {
  if (!sparse_) return dense_.trace();
  double t = 0.0;
  for (Index r = 0; r < dim_; ++r)
    for (Index p = csr_.row_ptr[r]; p < csr_.row_ptr[r + 1]; ++p)
      if (csr_.col[p] == r) t += csr_.val[p];
  return t;
}

double HermitianOperator::max_asymmetry() const {
  if (!sparse_) return (dense_ - dense_.transpose()).cwiseAbs().maxCoeff();
  double worst = 0.0;
  auto lookup = [&](Index r, Index c) {
    const auto b = csr_.col.begin() + csr_.row_ptr[r];
    const auto e = csr_.col.begin() + csr_.row_ptr[r + 1];
    const auto it = std::lower_bound(b, e, c);
    return (it != e && *it == c) ? csr_.val[static_cast<std::size_t>(it - csr_.col.begin())] : 0.0;
  };
  for (Index r = 0; r < dim_; ++r)
    for (Index p = csr_.row_ptr[r]; p < csr_.row_ptr[r + 1]; ++p)
      worst = std::max(worst, std::abs(csr_.val[p] - lookup(csr_.col[p], r)));
  return worst;
}

HermitianOperator HermitianOperator::affine(double a, double b) const {
  if (!sparse_) {
    RealMatrix m = a * dense_;
    m.diagonal().array() += b;
    return from_dense(std::move(m), basis_tag_, convention_);
  }
  std::vector<MatrixEntry> entries;
  entries.reserve(csr_.val.size() + static_cast<std::size_t>(dim_));
  for (Index r = 0; r < dim_; ++r) {
    for (Index p = csr_.row_ptr[r]; p < csr_.row_ptr[r + 1]; ++p) entries.push_back({r, csr_.col[p], a * csr_.val[p]});
    entries.push_back({r, r, b});
  }
  return from_csr(csr_from_entries(dim_, std::move(entries)), basis_tag_, convention_);
}

namespace {

int wrap(int site, int sites) { return ((site - 1) % sites + sites) % sites + 1; }

double sz(SpinWord c, int site) { return spin_up(c, site) ? 0.5 : -0.5; }
double pz(std::uint64_t c, int site) { return spin_up(c, site) ? 1.0 : -1.0; }

}  // namespace

HermitianOperator build_xxz(const SectorBasis& basis) {
  const int sites = basis.sites();
  if (sites < 4) throw DomainError("XXZ chain needs L >= 4 for next-nearest-neighbour terms");
  const Index d = static_cast<Index>(basis.dim());
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(d) * (sites + 1));
  for (Index i = 0; i < d; ++i) {
    const SpinWord c = basis.config(static_cast<std::size_t>(i));
    double diag = 0.0;
    for (int l = 1; l <= sites; ++l) {
      const int l1 = wrap(l + 1, sites);
      const int l2 = wrap(l + 2, sites);
      diag += 1.5 * sz(c, l) * sz(c, l1) + 0.5 * sz(c, l) * sz(c, l2);
      if (spin_up(c, l) != spin_up(c, l1)) {
        const SpinWord swapped = c ^ ((SpinWord{1} << (l - 1)) | (SpinWord{1} << (l1 - 1)));
        entries.push_back({i, static_cast<Index>(basis.index_of(swapped)), 0.5});
      }
    }
    entries.push_back({i, i, diag});
  }
  return HermitianOperator::from_csr(csr_from_entries(d, std::move(entries)), "sector:L=" + std::to_string(sites),
                                     SpinConvention::HalfSpin);
}

ObservableSpectrum normalize_observable(RealVector raw) {
  const double n = static_cast<double>(raw.size());
  const double mean = raw.sum() / n;
  const double var = raw.squaredNorm() / n - mean * mean;
  if (!(var > 0.0)) throw DomainError("observable has zero variance and cannot be normalized");
  ObservableSpectrum s;
  s.norm_const = std::sqrt(var);
  s.lambda = raw / s.norm_const;
  return s;
}

ObservableSpectrum build_density_wave(const SectorBasis& basis, int q) {
  const int sites = basis.sites();
  if (q < 1 || q > sites / 2) throw DomainError("density-wave mode q must lie in [1, L/2]");
  std::vector<double> weight(static_cast<std::size_t>(sites) + 1);
  for (int l = 1; l <= sites; ++l) weight[l] = std::cos(2.0 * std::numbers::pi * l * q / sites);
  RealVector raw(static_cast<Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const SpinWord c = basis.config(i);
    double v = 0.0;
    for (int l = 1; l <= sites; ++l) v += weight[l] * sz(c, l);
    raw[static_cast<Index>(i)] = v;
  }
  return normalize_observable(std::move(raw));
}

ObservableSpectrum build_energy_difference(const RealVector& energies_a, const RealVector& energies_b) {
  RealVector raw(energies_a.size() * energies_b.size());
  for (Index a = 0; a < energies_a.size(); ++a)
    for (Index b = 0; b < energies_b.size(); ++b) raw[a * energies_b.size() + b] = energies_a[a] - energies_b[b];
  return normalize_observable(std::move(raw));
}

int macrostate_label(double lambda, double delta_x) {
  const double r = std::abs(lambda) / delta_x;
  const int n = static_cast<int>(std::ceil(r - 0.5));
  return lambda < 0 ? -n : n;
}

CoarseObservable::CoarseObservable(const ObservableSpectrum& spec, double delta_x)
    : lambda_(spec.lambda), delta_x_(delta_x), norm_const_(spec.norm_const) {
  if (!(delta_x > 0.0)) throw DomainError("coarse-graining width must be positive");
  const Index d = lambda_.size();
  labels_.resize(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) labels_[static_cast<std::size_t>(i)] = macrostate_label(lambda_[i], delta_x);
  bins_ = labels_;
  std::sort(bins_.begin(), bins_.end());
  bins_.erase(std::unique(bins_.begin(), bins_.end()), bins_.end());
  members_.assign(bins_.size(), {});
  bin_of_state_.resize(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    const auto b = static_cast<std::size_t>(*bin_index(labels_[static_cast<std::size_t>(i)]));
    members_[b].push_back(i);
    bin_of_state_[static_cast<std::size_t>(i)] = static_cast<Index>(b);
  }
  offsets_.assign(1, 0);
  for (const auto& m : members_) {
    order_.insert(order_.end(), m.begin(), m.end());
    offsets_.push_back(static_cast<Index>(order_.size()));
  }
}

std::optional<Index> CoarseObservable::bin_index(int x) const {
  const auto it = std::lower_bound(bins_.begin(), bins_.end(), x);
  if (it == bins_.end() || *it != x) return std::nullopt;
  return static_cast<Index>(it - bins_.begin());
}

Index CoarseObservable::require_bin(int x) const {
  const auto b = bin_index(x);
  if (!b) throw EmptySubspaceError("macrostate x=" + std::to_string(x) + " has no states");
  return *b;
}

Index CoarseObservable::volume(int x) const {
  const auto b = bin_index(x);
  return b ? volume_at(*b) : 0;
}

const std::vector<Index>& CoarseObservable::members(int x) const {
  return members_[static_cast<std::size_t>(require_bin(x))];
}

RealVector CoarseObservable::indicator(int x) const {
  RealVector v = RealVector::Zero(dim());
  if (const auto b = bin_index(x))
    for (Index i : members_[static_cast<std::size_t>(*b)]) v[i] = 1.0;
  return v;
}

CoarseObservable coarse_grain(const ObservableSpectrum& spec, double delta_x) { return CoarseObservable(spec, delta_x); }

RealVector pauli_z_diagonal(int n, int site) {
  RealVector v(Index{1} << n);
  for (Index c = 0; c < v.size(); ++c) v[c] = pz(static_cast<std::uint64_t>(c), site);
  return v;
}

HermitianOperator build_tilted_ising(int n, double h_x, double h_z, double g_z) {
  if (n < 2) throw DomainError("Ising chain needs at least 2 sites");
  if (n > 14) throw CapacityError("single Ising chain limited to 14 sites");
  const Index d = Index{1} << n;
  std::vector<MatrixEntry> entries;
  for (Index c = 0; c < d; ++c) {
    const auto w = static_cast<std::uint64_t>(c);
    double diag = 0.0;
    for (int l = 1; l <= n; ++l) {
      diag += h_z * pz(w, l) + g_z * pz(w, l) * pz(w, wrap(l + 1, n));
      entries.push_back({c, static_cast<Index>(w ^ (std::uint64_t{1} << (l - 1))), h_x});
    }
    entries.push_back({c, c, diag});
  }
  return HermitianOperator::from_csr(csr_from_entries(d, std::move(entries)), "ising:n=" + std::to_string(n),
                                     SpinConvention::Pauli);
}

HermitianOperator build_coupled_ising(const IsingParams& p) {
  if (p.n < 2) throw DomainError("coupled Ising chains need n >= 2");
  if (2 * p.n > 14) throw CapacityError("coupled Ising model limited to 2n <= 14 sites");
  const HermitianOperator chain = build_tilted_ising(p.n, p.h_x, p.h_z, p.g_z);
  const CsrMatrix& h = chain.csr();
  const Index dn = chain.dim();
  const RealVector zn = pauli_z_diagonal(p.n, p.n);
  std::vector<MatrixEntry> entries;
  entries.reserve(static_cast<std::size_t>(dn * dn) * (2 * p.n + 1));
  for (Index a = 0; a < dn; ++a)
    for (Index b = 0; b < dn; ++b) {
      const Index row = a * dn + b;
      for (Index q = h.row_ptr[a]; q < h.row_ptr[a + 1]; ++q) entries.push_back({row, h.col[q] * dn + b, h.val[q]});
      for (Index q = h.row_ptr[b]; q < h.row_ptr[b + 1]; ++q) entries.push_back({row, a * dn + h.col[q], h.val[q]});
      entries.push_back({row, row, p.coupling * zn[a] * zn[b]});
    }
  return HermitianOperator::from_csr(csr_from_entries(dn * dn, std::move(entries)),
                                     "coupled-ising:n=" + std::to_string(p.n), SpinConvention::Pauli);
}

MagnetizationExample build_magnetization_example(int sites) {
  if (sites < 3) throw DomainError("magnetization example needs at least 3 sites");
  if (sites > 16) throw CapacityError("magnetization example limited to 16 sites");
  const Index d = Index{1} << sites;
  std::vector<MatrixEntry> entries;
  RealVector mag(d);
  for (Index c = 0; c < d; ++c) {
    const auto w = static_cast<std::uint64_t>(c);
    double m = 0.0;
    for (int l = 1; l <= sites; ++l) {
      m += pz(w, l);
      const std::uint64_t flip = (std::uint64_t{1} << (l - 1)) | (std::uint64_t{1} << (wrap(l + 1, sites) - 1));
      entries.push_back({c, static_cast<Index>(w ^ flip), 1.0});
    }
    mag[c] = m;
    entries.push_back({c, c, m});
  }
  const std::string tag = "ising-transverse:L=" + std::to_string(sites);
  return {HermitianOperator::from_csr(csr_from_entries(d, std::move(entries)), tag, SpinConvention::Pauli),
          HermitianOperator::from_diagonal(mag, tag)};
}

}  // namespace puredyn
