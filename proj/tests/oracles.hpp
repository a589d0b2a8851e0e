#pragma once

// Independent reference implementations for the tests. Each one follows the
// definition directly, with no shared code beyond the basic types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gridcube/cubelabel.hpp"
#include "gridcube/embed2d.hpp"
#include "gridcube/grid.hpp"
#include "gridcube/rational.hpp"
#include "gridcube/rounding.hpp"

namespace oracle {

using gridcube::BinaryMatrix;
using gridcube::Rational;
using gridcube::RationalMatrix;
using gridcube::u32;
using gridcube::u64;

inline u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

// s_i(r) solved from the budget identity
// ceil(r A / D) + s(1) + ... + s(r) = r 2^w, one r at a time.
inline std::vector<std::int64_t> s_from_budget(const std::vector<u64>& dims, int i) {
  u64 A = 1, D = 1;
  int e_prev = 0, e_i = 0;
  for (int t = 0; t < i; ++t) {
    A *= dims[static_cast<size_t>(t)];
    if (t == i - 2) {
      while ((u64{1} << e_prev) < A) ++e_prev;
    }
  }
  while ((u64{1} << e_i) < A) ++e_i;
  D = u64{1} << e_prev;
  u64 pages = 1;
  for (size_t t = static_cast<size_t>(i); t < dims.size(); ++t) pages *= dims[t];
  const u64 width = u64{1} << (e_i - e_prev);
  std::vector<std::int64_t> s;
  for (u64 r = 1; r <= pages; ++r)
    s.push_back(static_cast<std::int64_t>(width - (ceil_div(r * A, D) - ceil_div((r - 1) * A, D))));
  return s;
}

// Prefix-sum contracts of a matrix rounding, strict < 1 everywhere.
inline bool rounding_ok(const RationalMatrix& T, const BinaryMatrix& F) {
  const Rational one(1);
  auto small = [&](const Rational& x) { return x < one && -x < one; };
  Rational grand;
  for (size_t i = 0; i < T.rows(); ++i) {
    Rational d;
    for (size_t j = 0; j < T.cols(); ++j) {
      d += T.at(i, j) - Rational(F.at(i, j) ? 1 : 0);
      if (!small(d)) return false;
    }
    grand += d;
  }
  for (size_t j = 0; j < T.cols(); ++j) {
    Rational d;
    for (size_t i = 0; i < T.rows(); ++i) {
      d += T.at(i, j) - Rational(F.at(i, j) ? 1 : 0);
      if (!small(d)) return false;
    }
  }
  return small(grand);
}

// Exact row sums, initial column sums of equal depth within 1, initial row
// sums of equal width within 2.
inline bool balanced(const BinaryMatrix& F, const std::vector<std::int64_t>& X) {
  const size_t m = F.rows(), n = F.cols();
  for (size_t i = 0; i < m; ++i) {
    std::int64_t s = 0;
    for (size_t j = 0; j < n; ++j) s += F.at(i, j);
    if (s != X[i]) return false;
  }
  for (size_t depth = 1; depth <= m; ++depth) {
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (size_t j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (size_t i = 0; i < depth; ++i) s += F.at(i, j);
      lo = std::min(lo, s), hi = std::max(hi, s);
    }
    if (hi - lo > 1) return false;
  }
  for (size_t width = 1; width <= n; ++width) {
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (size_t i = 0; i < m; ++i) {
      std::int64_t s = 0;
      for (size_t j = 0; j < width; ++j) s += F.at(i, j);
      lo = std::min(lo, s), hi = std::max(hi, s);
    }
    if (hi - lo > 2) return false;
  }
  return true;
}

// Zero d of row r (both 1-based) as an offset from the start of row r,
// walking row-major and cyclically; d <= 0 walks backward.
inline std::int64_t zero_offset(const BinaryMatrix& F, size_t r, std::int64_t d) {
  const auto m = static_cast<std::int64_t>(F.rows()), n = static_cast<std::int64_t>(F.cols());
  const std::int64_t L = m * n;
  auto is_zero = [&](std::int64_t p) {
    const std::int64_t q = ((p % L) + L) % L;
    return !F.at(static_cast<size_t>(q / n), static_cast<size_t>(q % n));
  };
  const std::int64_t start = static_cast<std::int64_t>(r - 1) * n;
  std::int64_t p = start - 1, seen = 0;
  if (d >= 1) {
    while (seen < d) seen += is_zero(++p);
  } else {
    p = start;
    while (seen < 1 - d) seen += is_zero(--p);
  }
  return p - start + 1;
}

inline std::int64_t zero_column(const BinaryMatrix& F, size_t r, std::int64_t d) {
  const auto n = static_cast<std::int64_t>(F.cols());
  const std::int64_t off = zero_offset(F, r, d) - 1;
  return ((off % n) + n) % n + 1;
}

// Zero positions listed once, row-major; offsets extend cyclically.
struct ZeroList {
  std::vector<std::int64_t> pos;
  std::vector<std::int64_t> before;  // zeros in rows 1..r-1, index r-1
  std::int64_t L = 0, n = 0;

  explicit ZeroList(const BinaryMatrix& F) : L(static_cast<std::int64_t>(F.rows() * F.cols())),
                                             n(static_cast<std::int64_t>(F.cols())) {
    for (size_t i = 0; i < F.rows(); ++i) {
      before.push_back(static_cast<std::int64_t>(pos.size()));
      for (size_t j = 0; j < F.cols(); ++j)
        if (!F.at(i, j)) pos.push_back(static_cast<std::int64_t>(i * F.cols() + j));
    }
    before.push_back(static_cast<std::int64_t>(pos.size()));
  }
  std::int64_t offset(size_t r, std::int64_t d) const {
    const auto Z = static_cast<std::int64_t>(pos.size());
    std::int64_t g = before[r - 1] + d - 1, wraps = 0;
    while (g >= Z) g -= Z, ++wraps;
    while (g < 0) g += Z, --wraps;
    return pos[static_cast<size_t>(g)] + wraps * L - static_cast<std::int64_t>(r - 1) * n + 1;
  }
};

// Violations of the zero-gap bounds on F^X.
struct GapCounts {
  std::int64_t forward_window = 0, forward_gap = 0, backward_gap = 0, cross_gap = 0;
  bool ok() const { return forward_window + forward_gap + backward_gap + cross_gap == 0; }
};

inline GapCounts zero_gaps(const BinaryMatrix& F, const std::vector<std::int64_t>& X) {
  GapCounts out;
  const size_t m = F.rows(), n = F.cols();
  const auto N = static_cast<std::int64_t>(n);
  const ZeroList Z(F);
  auto entry = [&](std::int64_t p) {
    const std::int64_t q = p % Z.L;
    return F.at(static_cast<size_t>(q / N), static_cast<size_t>(q % N)) ? 1 : 0;
  };
  for (size_t i = 1; i <= m; ++i) {
    std::int64_t f = 0, d = 0;
    for (size_t h = 1; h <= n; ++h) {
      f += F.at(i - 1, h - 1);
      // Prefix of the constant row s_i/n through column h, rounded up.
      const auto t_ceil = static_cast<std::int64_t>(ceil_div(static_cast<u64>(X[i - 1]) * h, n));
      const bool forward = f == t_ceil;
      const bool zero = !F.at(i - 1, h - 1);
      if (zero) ++d;
      const auto p = static_cast<std::int64_t>((i - 1) * n + h - 1);
      std::int64_t run = 0;
      for (std::int64_t e = 1; e <= N; ++e) {
        run += entry(p + 2 * e - 1) + entry(p + 2 * e);
        if (forward && run > e) ++out.forward_window;
        if (!zero) continue;
        const std::int64_t gap = Z.offset(i, d + e) - Z.offset(i, d);
        if (forward && gap > 2 * e) ++out.forward_gap;
        if (!forward && gap > 2 * e + 2) ++out.backward_gap;
      }
    }
  }
  for (std::int64_t d = 1; d <= N; ++d) {
    std::int64_t base = INT64_MAX;
    for (size_t s = 1; s <= m; ++s)
      if (Z.before[s] - Z.before[s - 1] >= d) base = std::min(base, Z.offset(s, d));
    if (base == INT64_MAX) continue;
    for (size_t r = 1; r <= m; ++r)
      for (std::int64_t e = 0; e <= N; ++e)
        if (Z.offset(r, d + e) - base > 2 * e + 4) ++out.cross_gap;
  }
  return out;
}

// The column-filling construction of the base map: column j receives, chain
// by chain from the top, 1 + R_ij successive points of chain i. A double
// contribution is written bottom-up in even columns.
struct ChainImage {
  std::vector<std::vector<std::pair<u32, u32>>> cells;  // [chain-1][pos-1] = (row, col)
};

inline std::vector<int> r_first_column(u64 a1, int e1) {
  const u64 excess = (u64{1} << e1) - a1;
  std::vector<int> col(a1);
  for (u64 i = 1; i <= a1; ++i) col[i - 1] = static_cast<int>(i * excess / a1 - (i - 1) * excess / a1);
  return col;
}

inline ChainImage fill_columns(u64 a1, int e1, u64 columns) {
  const auto col = r_first_column(a1, e1);
  auto R = [&](u64 i, u64 j) { return col[((i - 1) + a1 * columns - (j - 1)) % a1]; };
  ChainImage out;
  out.cells.resize(a1);
  for (u64 j = 1; j <= columns; ++j) {
    u32 row = 0;
    for (u64 i = 1; i <= a1; ++i) {
      auto& c = out.cells[i - 1];
      if (R(i, j) == 0) {
        c.emplace_back(++row, static_cast<u32>(j));
      } else if (j % 2 == 1) {
        c.emplace_back(row + 1, static_cast<u32>(j));
        c.emplace_back(row + 2, static_cast<u32>(j));
        row += 2;
      } else {
        c.emplace_back(row + 2, static_cast<u32>(j));
        c.emplace_back(row + 1, static_cast<u32>(j));
        row += 2;
      }
    }
  }
  return out;
}

// Spine cycle, leaf adjacency and exact cover, from scratch.
inline bool valid_caterpillar(const gridcube::Caterpillar& c) {
  const u64 N = u64{1} << c.t;
  const size_t e = c.spine.size();
  if (e < 3 || e * static_cast<size_t>(2 * c.r + 2) != N) return false;
  std::vector<int> hits(N, 0);
  for (size_t i = 0; i < e; ++i) {
    const u32 s = c.spine[i], nxt = c.spine[(i + 1) % e];
    if (s >= N || __builtin_popcount(s ^ nxt) != 1) return false;
    ++hits[s];
    if (c.leaves[i].size() != static_cast<size_t>(2 * c.r + 1)) return false;
    for (u32 l : c.leaves[i]) {
      if (l >= N || __builtin_popcount(l ^ s) != 1) return false;
      ++hits[l];
    }
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

// Largest Hamming distance over vertex pairs at cyclic label distance 1..w.
inline int window_distance(const gridcube::CubeLabeling& lab, int w) {
  const u64 N = lab.label.size();
  int worst = 0;
  for (u64 x = 0; x < N; ++x)
    for (u64 y = x + 1; y < N; ++y) {
      const u64 dl = lab.label[x] > lab.label[y] ? lab.label[x] - lab.label[y] : lab.label[y] - lab.label[x];
      if (std::min(dl, N - dl) <= static_cast<u64>(w)) worst = std::max(worst, __builtin_popcountll(x ^ y));
    }
  return worst;
}

// Every grid edge as a pair of ranks, enumerated from coordinates.
inline std::vector<std::pair<u64, u64>> grid_edges(const std::vector<u64>& dims) {
  std::vector<std::pair<u64, u64>> out;
  u64 total = 1;
  for (u64 a : dims) total *= a;
  for (u64 v = 0; v < total; ++v) {
    u64 stride = 1;
    for (u64 a : dims) {
      if ((v / stride) % a + 1 < a) out.emplace_back(v, v + stride);
      stride *= a;
    }
  }
  return out;
}

}  // namespace oracle
