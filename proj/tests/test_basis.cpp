#include <doctest.h>

#include <algorithm>
#include <bit>

#include "puredyn/basis.hpp"
#include "puredyn/errors.hpp"

using namespace puredyn;

TEST_CASE("sector dimensions are central binomials") {
  CHECK(sector_dimension(4) == 6);
  CHECK(sector_dimension(8) == 70);
  CHECK(sector_dimension(10) == 252);
  CHECK(sector_dimension(12) == 924);
  CHECK(sector_dimension(14) == 3432);
  CHECK(sector_dimension(16) == 12870);
  CHECK(sector_dimension(28) == 40116600);
  CHECK_THROWS_AS(sector_dimension(7), SectorError);
  CHECK_THROWS_AS(sector_dimension(0), SectorError);
}

TEST_CASE("enumeration matches a brute-force scan of all words") {
  for (int l : {4, 6, 8, 10, 12}) {
    const SectorBasis b(l);
    std::vector<SpinWord> brute;
    for (SpinWord w = 0; w < (SpinWord{1} << l); ++w)
      if (std::popcount(w) == l / 2) brute.push_back(w);
    REQUIRE(b.dim() == brute.size());
    CHECK(std::equal(brute.begin(), brute.end(), b.configs().begin()));
  }
}

TEST_CASE("ranking round-trips over the whole sector") {
  for (int l : {6, 10, 14}) {
    const SectorBasis b(l);
    bool ok = true;
    for (std::size_t i = 0; i < b.dim(); ++i) ok = ok && b.index_of(b.config(i)) == i && b.index_roundtrip(i) == i;
    CHECK(ok);
  }
  const SectorBasis b(8);
  CHECK_THROWS_AS(b.index_roundtrip(b.dim()), DomainError);
  CHECK_THROWS_AS(b.index_of(0b111), DomainError);
  CHECK_FALSE(b.contains(0b1111'1111));
  CHECK(b.contains(0b0000'1111));
}

TEST_CASE("global flip stays in the sector and is an involution") {
  const SectorBasis b(10);
  bool ok = true;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const SpinWord f = b.flip_all(b.config(i));
    ok = ok && std::popcount(f) == 5 && (f ^ b.config(i)) == 0x3FF && b.flip_index(b.flip_index(i)) == i;
  }
  CHECK(ok);
}

TEST_CASE("site accessor uses one-based sites with site 1 as the lowest bit") {
  CHECK(spin_up(0b01, 1));
  CHECK_FALSE(spin_up(0b01, 2));
  CHECK(spin_up(0b10, 2));
}

TEST_CASE("invalid chain lengths") {
  CHECK_THROWS_AS(SectorBasis(5), SectorError);
  CHECK_THROWS_AS(SectorBasis(kMaxSectorSites + 2), CapacityError);
}
