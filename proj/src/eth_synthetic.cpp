#include "puredyn/eth_synthetic.hpp"

#include <cmath>
#include <random>

#include "puredyn/errors.hpp"
#include "puredyn/kernels.hpp"

namespace puredyn {

BandedMatrix::BandedMatrix(Index n, Index half_width)
    : n_(n), b_(std::min(half_width, std::max<Index>(n - 1, 0))),
      data_(static_cast<std::size_t>(n * (2 * b_ + 1)), cplx{}) {}

cplx BandedMatrix::get(Index i, Index j) const {
  if (std::abs(i - j) > b_) return {};
  return data_[static_cast<std::size_t>(i * (2 * b_ + 1) + (j - i + b_))];
}

BandedMatrix BandedMatrix::operator*(const BandedMatrix& o) const {
  BandedMatrix c(n_, b_ + o.b_);
  const Index wa = 2 * b_ + 1;
  const Index wb = 2 * o.b_ + 1;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n_; ++i) {
    const Index k0 = std::max<Index>(0, i - b_);
    const Index k1 = std::min(n_ - 1, i + b_);
    for (Index k = k0; k <= k1; ++k) {
      const cplx a = data_[static_cast<std::size_t>(i * wa + (k - i + b_))];
      if (a == cplx{}) continue;
      const Index j0 = std::max<Index>(0, k - o.b_);
      const Index j1 = std::min(n_ - 1, k + o.b_);
      for (Index j = j0; j <= j1; ++j) c.at(i, j) += a * o.data_[static_cast<std::size_t>(k * wb + (j - k + o.b_))];
    }
  }
  return c;
}

BandedMatrix BandedMatrix::scaled(const ComplexVector& left, const ComplexVector& right) const {
  BandedMatrix c = *this;
  for (Index i = 0; i < n_; ++i)
    for (Index j = std::max<Index>(0, i - b_); j <= std::min(n_ - 1, i + b_); ++j) c.at(i, j) *= left[i] * right[j];
  return c;
}

cplx BandedMatrix::trace_product(const BandedMatrix& o) const {
  const Index w = std::min(b_, o.b_);
  cplx s{};
  for (Index i = 0; i < n_; ++i)
    for (Index j = std::max<Index>(0, i - w); j <= std::min(n_ - 1, i + w); ++j) s += get(i, j) * o.get(j, i);
  return s;
}

cplx BandedMatrix::trace() const {
  cplx s{};
  for (Index i = 0; i < n_; ++i) s += get(i, i);
  return s;
}

RealMatrix BandedMatrix::real_dense() const {
  RealMatrix m = RealMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = std::max<Index>(0, i - b_); j <= std::min(n_ - 1, i + b_); ++j) m(i, j) = get(i, j).real();
  return m;
}

BandedMatrix SynthModel::member(int x) const {
  BandedMatrix p = random_parts[static_cast<std::size_t>(x)];
  const double diag = static_cast<double>(volumes[static_cast<std::size_t>(x)]) / static_cast<double>(D);
  for (Index k = 0; k < D; ++k) p.at(k, k) += diag;
  return p;
}

double SynthModel::calibration_error(int x) const {
  const BandedMatrix p = member(x);
  double sq = 0.0;
  for (Index i = 0; i < D; ++i)
    for (Index j = std::max<Index>(0, i - p.half_width()); j <= std::min(D - 1, i + p.half_width()); ++j)
      sq += std::norm(p.get(i, j));
  return std::abs(sq / static_cast<double>(volumes[static_cast<std::size_t>(x)]) - 1.0);
}

double SynthModel::resolution_deviation() const {
  BandedMatrix sum(D, d - 1);
  for (int x = 0; x < M; ++x) {
    const BandedMatrix p = member(x);
    for (Index i = 0; i < D; ++i)
      for (Index j = std::max<Index>(0, i - sum.half_width()); j <= std::min(D - 1, i + sum.half_width()); ++j)
        sum.at(i, j) += p.get(i, j);
  }
  double worst = 0.0;
  for (Index i = 0; i < D; ++i)
    for (Index j = std::max<Index>(0, i - sum.half_width()); j <= std::min(D - 1, i + sum.half_width()); ++j)
      worst = std::max(worst, std::abs(sum.get(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

SynthModel build_synth(Index D, int M, Index d, std::uint64_t seed, const SynthOptions& opt) {
  if (D < 2) throw DomainError("synthetic model needs D >= 2");
  if (M < 1) throw DomainError("synthetic model needs at least one macrostate");
  if (d < 1 || d > D) throw DomainError("band width must satisfy 1 <= d <= D");
  SynthModel m;
  m.D = D;
  m.M = M;
  m.d = d;
  m.seed = seed;
  m.delta_e = 1.0 / static_cast<double>(D);
  // Volumes as equal as possible when M does not divide D.
  for (int x = 0; x < M; ++x) m.volumes.push_back(D / M + (x < D % M ? 1 : 0));
  m.band_entries = 0;
  for (Index k = 0; k < D; ++k)
    m.band_entries += static_cast<std::size_t>(std::min(D - 1, k + d - 1) - std::max<Index>(0, k - d + 1) + 1);

  std::mt19937_64 level_gen(kernels::derive_seed(seed, 0));
  std::normal_distribution<double> normal;
  m.energies.resize(D);
  for (Index k = 0; k < D; ++k) {
    const double jitter = opt.level_jitter != 0.0 ? opt.level_jitter * normal(level_gen) : 0.0;
    m.energies[k] = m.delta_e * (static_cast<double>(k) + jitter);
  }

  for (int x = 0; x < M; ++x) {
    const double v = static_cast<double>(m.volumes[static_cast<std::size_t>(x)]);
    const double f = std::sqrt(v * (1.0 - v / static_cast<double>(D)) * static_cast<double>(D) /
                               static_cast<double>(m.band_entries));
    m.envelope.push_back(f);
    std::mt19937_64 gen(kernels::derive_seed(seed, static_cast<std::uint64_t>(x) + 1));
    BandedMatrix r(D, d - 1);
    const double scale = opt.random_scale * f / std::sqrt(static_cast<double>(D));
    for (Index k = 0; k < D; ++k)
      for (Index l = k; l <= std::min(D - 1, k + d - 1); ++l) {
        const double g = scale * normal(gen);
        r.at(k, l) = g;
        r.at(l, k) = g;
      }
    m.random_parts.push_back(std::move(r));
  }
  return m;
}

QTerms estimate_q_terms(const SynthModel& m, int x2, int x0, double t1, double t2) {
  if (x0 == x2) throw DomainError("q-term estimates assume x0 != x2");
  const Index D = m.D;
  const double mm = static_cast<double>(m.M);
  const double v0 = static_cast<double>(m.volumes[static_cast<std::size_t>(x0)]);
  ComplexVector u1(D), u2(D);
  for (Index k = 0; k < D; ++k) {
    u1[k] = std::polar(1.0, -m.energies[k] * t1);
    u2[k] = std::polar(1.0, -m.energies[k] * t2);
  }
  const ComplexVector u1c = u1.conjugate();
  const ComplexVector u2c = u2.conjugate();
  const BandedMatrix& p2 = m.random_parts[static_cast<std::size_t>(x2)];
  const BandedMatrix& p0 = m.random_parts[static_cast<std::size_t>(x0)];

  // A = U1 P0 U1†, G = U2† P2 U2, so tr{P2 U2 B U2†} = tr{G B}.
  const BandedMatrix a = p0.scaled(u1, u1c);
  const BandedMatrix g = p2.scaled(u2c, u2);

  QTerms q;
  q.q1 = (mm - 1.0) / mm * g.trace_product(a) / v0;

  std::vector<BandedMatrix> left;   // P_x1 A
  std::vector<BandedMatrix> right;  // P_x1' G
  cplx s2{}, s3{};
  for (int x = 0; x < m.M; ++x) {
    const BandedMatrix& p = m.random_parts[static_cast<std::size_t>(x)];
    left.push_back(p * a);
    right.push_back(p * g);
    s2 += g.trace_product(left.back());
    s3 += right.back().trace_product(a);
  }
  q.q2 = (mm - 1.0) / mm * s2 / v0;
  q.q3 = (mm - 1.0) / mm * s3 / v0;

  cplx s4{};
  for (int x = 0; x < m.M; ++x)
    for (int y = 0; y < m.M; ++y)
      if (x != y) s4 += right[static_cast<std::size_t>(y)].trace_product(left[static_cast<std::size_t>(x)]);
  q.q4 = s4 / v0;
  return q;
}

RandomWalkStats random_walk_check(Index D, int seeds, std::uint64_t root_seed) {
  if (seeds < 2) throw DomainError("random-walk check needs at least two seeds");
  std::vector<double> sums(static_cast<std::size_t>(seeds));
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 gen(kernels::derive_seed(root_seed, static_cast<std::uint64_t>(s)));
    std::normal_distribution<double> normal;
    double acc = 0.0;
    for (Index k = 0; k < D; ++k) acc += normal(gen);
    sums[static_cast<std::size_t>(s)] = acc;
  }
  RandomWalkStats r;
  for (double v : sums) r.mean += v;
  r.mean /= seeds;
  double var = 0.0;
  for (double v : sums) var += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(var / (seeds - 1));
  r.ratio = r.std / std::sqrt(static_cast<double>(D));
  return r;
}

}  // namespace puredyn
