#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace puredyn {

/// L-bit word, bit ℓ-1 holds site ℓ (1 = up).
using SpinWord = std::uint64_t;

inline constexpr int kMaxSectorSites = 30;

std::uint64_t binomial(int n, int k);

/// C(L, L/2) without enumerating; throws SectorError for odd L.
std::uint64_t sector_dimension(int sites);

inline bool spin_up(SpinWord c, int site) { return (c >> (site - 1)) & 1U; }

/// Zero-magnetization sector of an L-site spin-1/2 chain, words in ascending order.
class SectorBasis {
 public:
  explicit SectorBasis(int sites);

  int sites() const { return sites_; }
  std::size_t dim() const { return configs_.size(); }
  SpinWord config(std::size_t i) const { return configs_[i]; }
  std::span<const SpinWord> configs() const { return configs_; }

  /// Position of c in configs(); O(L) by combinatorial ranking.
  std::size_t index_of(SpinWord c) const;
  bool contains(SpinWord c) const;

  SpinWord flip_all(SpinWord c) const;
  std::size_t flip_index(std::size_t i) const { return index_of(flip_all(config(i))); }

  /// index_of(config(i)); throws DomainError when i is out of range.
  std::size_t index_roundtrip(std::size_t i) const;

 private:
  int sites_;
  SpinWord mask_;
  std::vector<SpinWord> configs_;
  std::vector<std::uint64_t> choose_;  // choose_[n*(sites+1)+k] = C(n,k)
};

}  // namespace puredyn
