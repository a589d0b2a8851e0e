#include <doctest.h>

#include <fstream>
#include <map>
#include <set>

#include "gridcube/pipeline.hpp"
#include "oracles.hpp"

using namespace gridcube;

namespace {

std::map<int, BinaryMatrix> load(const char* name) {
  std::ifstream in(std::string(GRIDCUBE_TEST_DATA) + "/" + name);
  std::map<int, BinaryMatrix> out;
  for (auto& t : parse_matrices(in)) out[t.stage] = t.F;
  return out;
}

Pipeline seeded(std::vector<u64> dims, const char* file) {
  PipelineOptions opt;
  opt.seeds = load(file);
  return Pipeline(GridSpec(std::move(dims)), opt);
}

// Address of the first j coordinates of a stage point, block t at bit e_{t-1}.
u64 address(const GridSpec& g, std::span<const u32> z, int j) {
  u64 a = 0;
  for (int t = 1; t <= j; ++t) a += static_cast<u64>(z[static_cast<size_t>(t - 1)] - 1) << g.e(t - 1);
  return a;
}

// Points of stage t per address, counted from scratch, and a check that the
// stage-t coordinate at each address runs through 1..count.
std::vector<u32> recount(const Pipeline& p, int t, bool& heights_are_ranks) {
  const GridSpec& g = p.spec();
  const auto& st = p.stage(t);
  std::vector<u32> h(u64{1} << g.e(t - 1), 0);
  std::map<u64, std::set<u32>> levels;
  for (Rank v = 0; v < g.total(); ++v) {
    const u64 a = address(g, st.at(v), t - 1);
    ++h[a];
    levels[a].insert(st(v, t));
  }
  heights_are_ranks = true;
  for (auto& [a, s] : levels)
    heights_are_ranks = heights_are_ranks && s.size() == h[a] && *s.begin() == 1 && *s.rbegin() == h[a];
  return h;
}

std::vector<u64> one_based(const GridSpec& g, Rank v) {
  std::vector<u64> x;
  for (u32 c : unrank(g, v).coords) x.push_back(c + 1);
  return x;
}

}  // namespace

TEST_CASE("blank sequences of the worked grids") {
  CHECK(s_sequence(GridSpec({3, 7, 4}), 2) == std::vector<std::int64_t>{2, 3, 3, 3});
  CHECK(s_sequence(GridSpec({3, 7, 4, 3}), 3) == std::vector<std::int64_t>{1, 1, 2});
  CHECK(s_sequence(GridSpec({3, 7, 4, 3}), 2) ==
        std::vector<std::int64_t>{2, 3, 3, 3, 2, 3, 3, 3, 2, 3, 3, 3});
}

TEST_CASE("blank sequences agree with the budget identity") {
  const std::vector<std::vector<u64>> grids{{3, 7, 4, 3}, {5, 6, 7, 8}, {9, 9, 9}, {12, 5, 7, 6, 5},
                                            {3, 3, 3, 3, 3, 3}, {17, 31, 5}, {8, 8, 8}, {6, 10, 3, 2}};
  for (const auto& d : grids) {
    const GridSpec g(d);
    for (int i = 2; i <= g.k() - 1; ++i) {
      const auto s = s_sequence(g, i);
      CHECK(s == oracle::s_from_budget(d, i));
      const std::int64_t width = std::int64_t{1} << g.width(i);
      for (auto x : s) CHECK(2 * x <= width);
    }
  }
}

TEST_CASE("library designation matrices pass the balance oracle") {
  for (const auto& d : std::vector<std::vector<u64>>{{3, 7, 4, 3}, {5, 6, 7, 8}, {12, 5, 7, 6}, {9, 9, 9}}) {
    const GridSpec g(d);
    for (int i = 2; i <= g.k() - 1; ++i) {
      const auto plan = build_blank_plan(g, i);
      CHECK(oracle::balanced(plan.F, plan.s));
      CHECK(validate_designation(g, i, plan.F).ok());
    }
  }
}

TEST_CASE("printed designation matrices validate, wrong ones do not") {
  const auto a = load("table1a.txt");
  CHECK(validate_designation(GridSpec({3, 7, 4}), 2, a.at(2)).ok());
  const auto bc = load("table1bc.txt");
  CHECK(validate_designation(GridSpec({3, 7, 4, 3}), 2, bc.at(2)).ok());
  CHECK(validate_designation(GridSpec({3, 7, 4, 3}), 3, bc.at(3)).ok());
  // Row sums (1,1,2) but the wrong shape for stage 2.
  CHECK_FALSE(validate_designation(GridSpec({3, 7, 4, 3}), 2, bc.at(3)).ok());
  std::vector<std::string> bad_rows{"1100", "0010", "0001"};
  CHECK_FALSE(validate_designation(GridSpec({3, 7, 4, 3}), 3, BinaryMatrix::from_rows(bad_rows)).ok());
  CHECK_THROWS_AS(make_blank_plan(GridSpec({3, 7, 4, 3}), 3, BinaryMatrix::from_rows(bad_rows)),
                  std::invalid_argument);
}

TEST_CASE("power-of-two prefixes get no blanks") {
  const GridSpec g({8, 8, 8});
  for (int i = 2; i <= 2; ++i) {
    const auto plan = build_blank_plan(g, i);
    CHECK(plan.F.total() == 0);
    for (auto x : plan.s) CHECK(x == 0);
  }
  const Pipeline p(g);
  const auto& inf = p.inflation(2);
  for (Rank v = 0; v < g.total(); ++v) CHECK(inf.level[v] == p.stage(2)(v, 2));
}

TEST_CASE("inflation skips designated blank levels") {
  const auto p = seeded({3, 7, 4}, "table1a.txt");
  const auto& F = p.plan(2).F;
  // Nonblank levels in order, as (section - 1) * 8 + column.
  std::vector<u64> nonblank;
  for (size_t r = 0; r < F.rows(); ++r)
    for (size_t c = 0; c < F.cols(); ++c)
      if (!F.at(r, c)) nonblank.push_back(r * 8 + c + 1);
  CHECK(nonblank.size() == 21);
  const auto& inf = p.inflation(2);
  bool saw_first = false;
  for (Rank v = 0; v < p.spec().total(); ++v) {
    const u32 z = p.stage(2)(v, 2);
    CHECK(inf.level[v] == nonblank[z - 1]);
    if (z == 1) {
      CHECK(inf.level[v] == 2);
      saw_first = true;
    }
  }
  CHECK(saw_first);
  // Levels used in sections 1..r are ceil(21 r / 4), the budget identity.
  for (u64 r = 1; r <= 4; ++r) {
    std::set<u64> used;
    for (Rank v = 0; v < p.spec().total(); ++v)
      if (inf.section[v] <= r) used.insert(inf.level[v]);
    CHECK(used.size() <= oracle::ceil_div(21 * r, 4));
  }
}

TEST_CASE("three-dimensional worked grid") {
  const GridSpec g({3, 7, 4});
  const Pipeline p(g);
  std::set<std::vector<u32>> images;
  for (Rank v = 0; v < g.total(); ++v) {
    const auto z = p.fk().at(v);
    images.insert({z.begin(), z.end()});
    CHECK(z[0] >= 1);
    CHECK(z[0] <= 4);
    CHECK(z[1] >= 1);
    CHECK(z[1] <= 8);
    CHECK(z[2] >= 1);
    CHECK(z[2] <= 3);
  }
  CHECK(images.size() == 84);
  bool ranks = false;
  const auto h = recount(p, 3, ranks);
  CHECK(ranks);
  CHECK(*std::max_element(h.begin(), h.end()) == 3);
  const auto rep = check_pipeline(p, 3);
  CHECK_MESSAGE(rep.ok(), rep.str());
}

TEST_CASE("seeded four-dimensional worked grid") {
  const auto p = seeded({3, 7, 4, 3}, "table1bc.txt");
  const GridSpec& g = p.spec();
  bool ranks = false;
  const auto h3 = recount(p, 3, ranks);
  CHECK(ranks);
  CHECK(stack_heights(p, 3, 12) == h3);
  for (u32 x = 1; x <= 4; ++x) {
    const std::vector<u32> z2{x, 2}, z5{x, 5};
    CHECK(h3[address(g, z2, 2)] == 7);
    CHECK(h3[address(g, z5, 2)] == 8);
  }
  const auto h4 = recount(p, 4, ranks);
  CHECK(ranks);
  CHECK(*std::max_element(h4.begin(), h4.end()) == 2);
  const auto after2 = stack_heights(p, 4, 2);
  CHECK(std::count(after2.begin(), after2.end(), 2u) == 64);
  CHECK(std::count(after2.begin(), after2.end(), 1u) == 64);
  // Stack (3,1,2) holds (3,2,2,1) below (2,1,4,2).
  std::map<u32, std::vector<u64>> stack;
  for (Rank v = 0; v < g.total(); ++v) {
    const auto z = p.fk().at(v);
    if (z[0] == 3 && z[1] == 1 && z[2] == 2) stack[z[3]] = one_based(g, v);
  }
  REQUIRE(stack.size() == 2);
  CHECK(stack[1] == std::vector<u64>{3, 2, 2, 1});
  CHECK(stack[2] == std::vector<u64>{2, 1, 4, 2});
}

TEST_CASE("stack heights by section prefix match a recount") {
  for (const auto& d : std::vector<std::vector<u64>>{{5, 6, 7}, {3, 7, 4, 3}, {6, 5, 5, 2}}) {
    const Pipeline p{GridSpec(d)};
    for (int t = 3; t <= p.spec().k(); ++t) {
      const auto& inf = p.inflation(t - 1);
      const u64 P = p.spec().pages(t - 1);
      for (u64 r = 1; r <= P; ++r) {
        std::vector<u32> h(u64{1} << p.spec().e(t - 1), 0);
        for (Rank v = 0; v < p.spec().total(); ++v)
          if (inf.section[v] <= r) ++h[address(p.spec(), p.stage(t).at(v), t - 1)];
        CHECK(stack_heights(p, t, r) == h);
        const u64 l = stack_bound(p.spec(), t, r);
        CHECK(l == oracle::ceil_div(r * p.spec().prefix(t - 1), u64{1} << p.spec().e(t - 1)));
      }
    }
  }
}

TEST_CASE("two-dimensional grids skip the lift") {
  const GridSpec g({5, 9});
  const Pipeline p(g);
  const auto base = build_f2(g);
  for (Rank v = 0; v < g.total(); ++v) {
    CHECK(p.fk()(v, 1) == base.at(v).row);
    CHECK(p.fk()(v, 2) == base.at(v).col);
  }
}

TEST_CASE("every stage is injective, in range and prefix stable") {
  for (const auto& d : std::vector<std::vector<u64>>{{5, 5, 5}, {6, 7, 8, 5}, {3, 3, 3, 3, 3}, {2, 9, 2, 5}}) {
    const GridSpec g(d);
    const Pipeline p(g);
    for (int i = 2; i <= g.k(); ++i) {
      const auto& st = p.stage(i);
      std::set<std::vector<u32>> seen;
      for (Rank v = 0; v < g.total(); ++v) {
        const auto z = st.at(v);
        seen.insert({z.begin(), z.end()});
        for (int j = 1; j < i; ++j) {
          CHECK(z[static_cast<size_t>(j - 1)] >= 1);
          CHECK(z[static_cast<size_t>(j - 1)] <= (u64{1} << g.width(j)));
          CHECK(z[static_cast<size_t>(j - 1)] == p.fk()(v, j));
        }
        CHECK(z[static_cast<size_t>(i - 1)] <= g.level_budget(i));
      }
      CHECK(seen.size() == g.total());
    }
    const auto rep = check_pipeline(p, 5);
    CHECK_MESSAGE(rep.ok(), rep.str());
  }
}

TEST_CASE("stage dump") {
  const Pipeline p(GridSpec({3, 7, 4}));
  const std::string s = dump_stage(p, 3);
  CHECK(s.rfind("STAGE 3 3\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 85);
  const auto z = p.fk().at(0);
  CHECK(s.find("\n0: (" + std::to_string(z[0]) + "," + std::to_string(z[1]) + "," + std::to_string(z[2]) + ")\n") !=
        std::string::npos);
}

TEST_CASE("unused or misshapen seeds are rejected") {
  PipelineOptions opt;
  opt.seeds = load("table1a.txt");
  CHECK_THROWS_AS(Pipeline(GridSpec({3, 7}), opt), std::invalid_argument);
  CHECK_THROWS_AS(Pipeline(GridSpec({3, 7, 4, 3}), opt), std::invalid_argument);
}

TEST_CASE("wraparound nonblank distance") {
  const auto p = seeded({3, 7, 4}, "table1a.txt");
  const auto& plan = p.plan(2);
  // Sections hold 6, 5, 5, 5 nonblank levels.
  CHECK(plan.nonblank_in(1) == 6);
  CHECK(nu_distance(plan, 1, 2, 1, 5) == 3);
  CHECK(nu_distance(plan, 1, 6, 2, 1) == 1);
  CHECK(nu_distance(plan, 2, 1, 1, 6) == 1);
}
