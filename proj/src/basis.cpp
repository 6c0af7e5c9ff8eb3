#include "puredyn/basis.hpp"

#include <bit>
#include <string>

#include "puredyn/errors.hpp"

namespace puredyn {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  return r;
}

std::uint64_t sector_dimension(int sites) {
  if (sites < 2 || sites % 2 != 0)
    throw SectorError("zero-magnetization sector needs an even site count >= 2, got " + std::to_string(sites));
  return binomial(sites, sites / 2);
}

SectorBasis::SectorBasis(int sites) : sites_(sites) {
  const std::uint64_t d = sector_dimension(sites);
  if (sites > kMaxSectorSites)
    throw CapacityError("sector basis limited to L <= " + std::to_string(kMaxSectorSites) + ", got L=" +
                        std::to_string(sites));
  mask_ = sites == 64 ? ~SpinWord{0} : ((SpinWord{1} << sites) - 1);

  choose_.assign(static_cast<std::size_t>(sites + 1) * (sites + 1), 0);
  for (int n = 0; n <= sites; ++n)
    for (int k = 0; k <= n; ++k) choose_[n * (sites + 1) + k] = binomial(n, k);

  // Gosper's hack walks fixed-popcount words in increasing order.
  configs_.reserve(d);
  SpinWord c = (SpinWord{1} << (sites / 2)) - 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    configs_.push_back(c);
    const SpinWord u = c & (~c + 1);
    const SpinWord v = c + u;
    if (v == 0) break;
    c = v + (((v ^ c) / u) >> 2);
  }
}

bool SectorBasis::contains(SpinWord c) const {
  return (c & ~mask_) == 0 && std::popcount(c) == sites_ / 2;
}

std::size_t SectorBasis::index_of(SpinWord c) const {
  if (!contains(c)) throw DomainError("configuration is not in the zero-magnetization sector");
  std::size_t rank = 0;
  int j = 1;
  const int stride = sites_ + 1;
  while (c != 0) {
    const int p = std::countr_zero(c);
    rank += choose_[p * stride + j];
    ++j;
    c &= c - 1;
  }
  return rank;
}

SpinWord SectorBasis::flip_all(SpinWord c) const { return ~c & mask_; }

std::size_t SectorBasis::index_roundtrip(std::size_t i) const {
  if (i >= dim()) throw DomainError("basis index " + std::to_string(i) + " out of range");
  return index_of(configs_[i]);
}

}  // namespace puredyn
