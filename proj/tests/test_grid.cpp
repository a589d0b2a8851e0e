#include <doctest.h>

#include <random>
#include <set>

#include "gridcube/grid.hpp"

using namespace gridcube;

namespace {

// Smallest e with 2^e >= x, by repeated doubling.
int doubling_log2(unsigned __int128 x) {
  int e = 0;
  unsigned __int128 p = 1;
  while (p < x) p <<= 1, ++e;
  return e;
}

}  // namespace

TEST_CASE("exponents of worked grids") {
  const std::vector<u64> a{3, 7, 4};
  CHECK(compute_exponents(a) == std::vector<int>{0, 2, 5, 7});
  const std::vector<u64> b{2, 2, 2};
  CHECK(compute_exponents(b) == std::vector<int>{0, 1, 2, 3});
  const std::vector<u64> c{5, 9};
  CHECK(compute_exponents(c) == std::vector<int>{0, 3, 6});
}

TEST_CASE("exponents agree with repeated doubling") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<u64> dims;
    unsigned __int128 prod = 1;
    const int k = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) {
      const u64 a = 2 + rng() % ((trial % 3 == 0) ? 5000 : 40);
      if (prod * a > (static_cast<unsigned __int128>(1) << 63)) break;
      dims.push_back(a);
      prod *= a;
    }
    if (dims.size() < 2) continue;
    const auto e = compute_exponents(dims);
    unsigned __int128 p = 1;
    CHECK(e[0] == 0);
    for (size_t i = 0; i < dims.size(); ++i) {
      p *= dims[i];
      CHECK(e[i + 1] == doubling_log2(p));
    }
  }
}

TEST_CASE("exponents reject bad dims") {
  CHECK_THROWS_AS(compute_exponents(std::vector<u64>{}), std::invalid_argument);
  CHECK_THROWS_AS(compute_exponents(std::vector<u64>{3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({5}), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({2, 0, 4}), std::invalid_argument);
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(GridSpec({1024, 1024, 1024}), SizeError);
  CHECK_NOTHROW(GridSpec({1024, 1024}, u64{1} << 20));
  CHECK_THROWS_AS(GridSpec({1024, 1025}, u64{1} << 20), SizeError);
}

TEST_CASE("level budgets") {
  const GridSpec g({3, 7, 4, 3});
  CHECK(g.total() == 252);
  CHECK(level_budget(g, 2) == 63);
  CHECK(level_budget(g, 3) == 8);
  CHECK(level_budget(g, 4) == 2);
  CHECK(level_budget(GridSpec({4, 8}), 2) == 8);
  CHECK(g.pages(1) == 84);
  CHECK(g.pages(4) == 1);
}

TEST_CASE("kappa") {
  const GridSpec g2({3, 7});
  CHECK(kappa(g2, GridVertex::from_one_based(std::vector<u64>{2, 5})) == ChainPoint{2, 5});
  const GridSpec g3({3, 7, 4});
  CHECK(kappa(g3, GridVertex::from_one_based(std::vector<u64>{2, 4, 3})) == ChainPoint{2, 18});
  const GridSpec g4({3, 7, 4, 3});
  CHECK(kappa(g4, GridVertex::from_one_based(std::vector<u64>{1, 1, 1, 1})) == ChainPoint{1, 1});
}

TEST_CASE("page index") {
  const GridSpec g({3, 7, 4, 3});
  CHECK(page_index(g, GridVertex::from_one_based(std::vector<u64>{2, 4, 2, 2}), 2) == 6);
  CHECK(page_index(g, GridVertex::from_one_based(std::vector<u64>{2, 4, 1, 1}), 2) == 1);
  CHECK(page_index(g, GridVertex::from_one_based(std::vector<u64>{3, 7, 1, 1}), 3) == 1);
  CHECK_THROWS_AS(page_index(g, GridVertex::from_one_based(std::vector<u64>{1, 1, 1, 1}), 1), std::invalid_argument);
  CHECK_THROWS_AS(page_index(g, GridVertex::from_one_based(std::vector<u64>{1, 1, 1, 1}), 4), std::invalid_argument);
}

TEST_CASE("rank, kappa and page structure on every vertex") {
  const GridSpec g({3, 7, 4, 3});
  std::set<std::pair<u64, u64>> chains;
  Rank expect = 0;
  // Enumerate with x_1 fastest.
  for (u64 x4 = 1; x4 <= 3; ++x4)
    for (u64 x3 = 1; x3 <= 4; ++x3)
      for (u64 x2 = 1; x2 <= 7; ++x2)
        for (u64 x1 = 1; x1 <= 3; ++x1, ++expect) {
          const std::vector<u64> xs{x1, x2, x3, x4};
          const auto v = GridVertex::from_one_based(xs);
          const Rank r = rank_of(g, v);
          CHECK(r == expect);
          CHECK(unrank(g, r).coords == v.coords);
          // Chain position by the direct formula y = (x4-1) 7 4 + (x3-1) 7 + x2.
          const u64 y = (x4 - 1) * 28 + (x3 - 1) * 7 + x2;
          const auto kp = kappa(g, v);
          CHECK(kp == ChainPoint{x1, y});
          CHECK(kappa(g, r) == kp);
          chains.insert({kp.chain, kp.position});
          // The j-th 2-page occupies positions (j-1) 7 + 1 .. j 7.
          const u64 page2 = page_index(g, v, 2);
          CHECK(page2 == (x4 - 1) * 4 + x3);
          CHECK(y > (page2 - 1) * 7);
          CHECK(y <= page2 * 7);
          CHECK(page_index(g, v, 3) == x4);
          for (int i = 1; i <= 4; ++i) CHECK(coord_of(g, r, i) + 1 == xs[static_cast<size_t>(i - 1)]);
        }
  CHECK(chains.size() == 252);
}

TEST_CASE("page order refinement") {
  const GridSpec g({3, 4, 3, 2, 3});
  for (Rank v = 0; v < g.total(); v += 5)
    for (Rank w = 0; w < g.total(); w += 7)
      for (int i = 3; i <= 4; ++i) {
        if (page_of(g, v, i - 1) < page_of(g, w, i - 1)) CHECK(page_of(g, v, i) <= page_of(g, w, i));
      }
}

TEST_CASE("level address decomposition") {
  const GridSpec g({3, 7, 4});
  // e_2 - e_1 = 3, so sections of 8 levels.
  const LevelAddress first(g, 2, 1);
  CHECK(first.section() == 1);
  CHECK(first.offset() == 1);
  const LevelAddress l(g, 2, 17);
  CHECK(l.section() == 3);
  CHECK(l.offset() == 1);
  for (u64 c = 1; c <= 64; ++c) {
    const LevelAddress a(g, 2, c);
    CHECK((a.section() - 1) * 8 + a.offset() == c);
    CHECK(a.offset() >= 1);
    CHECK(a.offset() <= 8);
  }
  CHECK_THROWS(LevelAddress(g, 2, 0));
}
