#include "gridcube/embed2d.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gridcube {

CirculantR::CirculantR(u64 a1, int e1) : a1_(a1), e1_(e1) {
  if (a1 < 2 || e1 < 1 || e1 > 62 || (u64{1} << (e1 - 1)) >= a1 || a1 > (u64{1} << e1))
    throw std::invalid_argument("need 2^(e1-1) < a1 <= 2^e1");
  col_.resize(a1);
  for (u64 i = 1; i <= a1; ++i) col_[i - 1] = static_cast<std::uint8_t>(S(i) - S(i - 1));
}

CirculantR build_R(u64 a1, int e1) { return CirculantR(a1, e1); }

RunSums consecutive_sum(const CirculantR& R, u64 t) {
  if (t < 1) throw std::invalid_argument("run length must be positive");
  const u64 a = R.a1();
  RunSums out{true, R.S(t), UINT64_MAX, 0};
  // Rows and columns are both cyclic shifts of the first column.
  for (u64 start = 0; start < a; ++start) {
    u64 s = 0;
    for (u64 d = 0; d < t; ++d) s += R.first_column()[(start + d) % a];
    out.min_sum = std::min(out.min_sum, s);
    out.max_sum = std::max(out.max_sum, s);
  }
  out.ok = out.min_sum >= out.S && out.max_sum <= out.S + 1;
  return out;
}

ChainMap::ChainMap(u64 a1, int e1, u64 columns)
    : R_(a1, e1), m_(columns), cells_(a1), n_(a1 * columns) {
  if (columns < 1) throw std::invalid_argument("need at least one column");
  const u64 H = height();
  for (auto& c : cells_) c.reserve(columns * 2);
  for (u64 j = 1; j <= m_; ++j) {
    u64 c = 0;  // rows of column j filled so far
    for (u64 r = 1; r <= a1; ++r) {
      auto& chain = cells_[r - 1];
      const auto col = static_cast<u32>(j);
      if (R_(r, j) == 0) {
        chain.push_back({static_cast<u32>(c + 1), col});
        c += 1;
      } else if (j % 2 == 0) {
        chain.push_back({static_cast<u32>(c + 2), col});
        chain.push_back({static_cast<u32>(c + 1), col});
        c += 2;
      } else {
        chain.push_back({static_cast<u32>(c + 1), col});
        chain.push_back({static_cast<u32>(c + 2), col});
        c += 2;
      }
      n_[(r - 1) * m_ + j - 1] = chain.size();
    }
    if (c != H) throw std::logic_error("column not filled exactly");
  }
}

ChainMap build_chain_map(u64 a1, int e1, u64 columns) { return ChainMap(a1, e1, columns); }

std::string ChainMap::dump() const {
  std::ostringstream os;
  const u64 H = height();
  std::vector<std::pair<u64, u64>> owner(H);
  for (u64 j = 1; j <= m_; ++j) {
    for (u64 i = 1; i <= a1(); ++i)
      for (u64 p = through(i, j - 1) + 1; p <= through(i, j); ++p) owner[at(i, p).row - 1] = {i, p};
    os << "col " << j << ':';
    for (const auto& [i, p] : owner) os << " (" << i << ',' << p << ')';
    os << '\n';
  }
  return os.str();
}

Cell closed_form_cell(const CirculantR& R, u64 chain, u64 pos) {
  // Column: least j with N_{chain,j} >= pos, where N_{ij} = j + sum_{t<=j} R_{it}.
  u64 j = 0, N = 0;
  while (N < pos) {
    ++j;
    N += 1 + static_cast<u64>(R(chain, j));
  }
  const u64 local = pos - (N - 1 - static_cast<u64>(R(chain, j)));  // 1 or 2
  u64 above = 0;  // |L_{chain-1}(j)|
  for (u64 t = 1; t < chain; ++t) above += 1 + static_cast<u64>(R(t, j));
  u64 row;
  if (R(chain, j) == 0)
    row = above + 1;
  else if (j % 2 == 0)
    row = above + (local == 1 ? 2 : 1);
  else
    row = above + local;
  return {static_cast<u32>(row), static_cast<u32>(j)};
}

ColumnProfile f2_column_profile(const ChainMap& f, u64 chain, u64 col) {
  if (chain < 1 || chain > f.a1() || col < 1 || col > f.columns())
    throw std::invalid_argument("profile index out of range");
  ColumnProfile p{};
  p.first_pos = f.through(chain, col - 1) + 1;
  p.count = static_cast<int>(f.through(chain, col) - f.through(chain, col - 1));
  for (int t = 0; t < p.count; ++t) p.rows[t] = f.at(chain, p.first_pos + static_cast<u64>(t)).row;
  return p;
}

Embedding2D build_f2(const GridSpec& spec, u64 m) {
  if (m < spec.level_budget(2)) throw std::invalid_argument("fewer columns than u_2");
  Embedding2D emb{spec, ChainMap(spec.a(1), spec.e(1), m), {}};
  const u64 P1 = spec.pages(1);
  for (u64 i = 1; i <= spec.a(1); ++i)
    if (emb.f.length(i) < P1) throw std::logic_error("chain too short to hold the grid");
  emb.image.resize(spec.total());
  for (Rank v = 0; v < spec.total(); ++v) {
    auto [chain, pos] = kappa(spec, v);
    emb.image[v] = emb.f.at(chain, pos);
  }
  return emb;
}

namespace {

std::string num(long long v) { return std::to_string(v); }

}  // namespace

Report check_chain_map(const ChainMap& f) {
  Report rep;
  const u64 a = f.a1(), m = f.columns(), H = f.height();
  const CirculantR& R = f.R();
  auto N = [&](u64 i, u64 j) { return f.through(i, j); };

  // Column sums and run sums of R.
  {
    u64 colsum = 0;
    for (auto b : R.first_column()) colsum += b;
    bool runs = true;
    for (u64 t = 1; t <= a; ++t) runs = runs && consecutive_sum(R, t).ok;
    rep.pass_fail("R.column_sum", colsum == H - a, num(static_cast<long long>(colsum)));
    rep.pass_fail("R.runs", runs);
  }

  // Occupancy per column and monotonicity along chains.
  bool occ = true, mono = true, closed = true;
  for (u64 i = 1; i <= a; ++i) {
    for (u64 j = 1; j <= m; ++j) {
      auto p = f2_column_profile(f, i, j);
      occ = occ && p.count == 1 + R(i, j);
      if (p.count == 2) occ = occ && (p.rows[0] + 1 == p.rows[1] || p.rows[1] + 1 == p.rows[0]);
      for (int t = 0; t < p.count; ++t)
        occ = occ && f.at(i, p.first_pos + static_cast<u64>(t)).col == j;
    }
    for (u64 p = 1; p < f.length(i); ++p) {
      auto c0 = f.at(i, p).col, c1 = f.at(i, p + 1).col;
      mono = mono && c0 <= c1 && c1 <= c0 + 1;
    }
    for (u64 p = 1; p <= f.length(i); ++p) closed = closed && closed_form_cell(R, i, p) == f.at(i, p);
  }
  rep.pass_fail("column_occupancy", occ);
  rep.pass_fail("chain_monotone", mono);
  rep.pass_fail("closed_form_agrees", closed);

  // L_r(j) is an initial segment of size r + sum_{i<=r} R_ij, and every
  // column is filled.
  std::vector<u64> owner(H);
  std::vector<u64> Lsize(a * m);  // |L_r(j)| at (r-1)*m + j-1
  bool seg = true, cover = true;
  for (u64 j = 1; j <= m; ++j) {
    std::fill(owner.begin(), owner.end(), 0);
    for (u64 i = 1; i <= a; ++i)
      for (u64 p = N(i, j - 1) + 1; p <= N(i, j); ++p) {
        auto row = f.at(i, p).row;
        if (row < 1 || row > H || owner[row - 1]) cover = false;
        else owner[row - 1] = i;
      }
    for (u64 r = 0; r < H; ++r) cover = cover && owner[r] != 0;
    for (u64 r = 1; r < H; ++r) seg = seg && owner[r - 1] <= owner[r];
    u64 expect = 0;
    for (u64 r = 1; r <= a; ++r) {
      expect += 1 + static_cast<u64>(R(r, j));
      u64 cnt = static_cast<u64>(std::count_if(owner.begin(), owner.end(), [&](u64 o) { return o <= r; }));
      seg = seg && cnt == expect;
      Lsize[(r - 1) * m + j - 1] = cnt;
    }
  }
  rep.pass_fail("column_prefix_segments", seg);
  rep.pass_fail("covers_all_columns", cover);

  // Window counts pi(i, r->r+j) = N_{i,r+j} - N_{i,r-1}.
  bool prefix = true, window = true, spread = true;
  for (u64 i = 1; i <= a; ++i) {
    u64 s = 0;
    for (u64 j = 1; j <= m; ++j) {
      s += static_cast<u64>(R(i, j));
      prefix = prefix && N(i, j) == j + s;
    }
  }
  for (u64 w = 1; w <= m; ++w) {  // w = j + 1 columns
    u64 lo = UINT64_MAX, hi = 0;
    for (u64 i = 1; i <= a; ++i)
      for (u64 r = 1; r + w - 1 <= m; ++r) {
        u64 pi = N(i, r + w - 1) - N(i, r - 1);
        lo = std::min(lo, pi);
        hi = std::max(hi, pi);
      }
    window = window && lo >= w + R.S(w) && hi <= w + 1 + R.S(w);
    spread = spread && hi - lo <= 1;
  }
  rep.pass_fail("window_count_prefix", prefix);
  rep.pass_fail("window_count_range", window);
  rep.pass_fail("window_count_spread", spread);

  // Spread of N and of the segment sizes |L_r(j)| across columns.
  bool dN = true, dL = true;
  long long shift = 0;
  for (u64 j = 1; j <= m; ++j) {
    u64 lo = UINT64_MAX, hi = 0;
    for (u64 i = 1; i <= a; ++i) lo = std::min(lo, N(i, j)), hi = std::max(hi, N(i, j));
    dN = dN && hi - lo <= 1;
  }
  auto L = [&](u64 r, u64 j) { return static_cast<long long>(Lsize[(r - 1) * m + j - 1]); };
  for (u64 r = 1; r <= a; ++r) {
    long long lo = L(r, 1), hi = L(r, 1);
    long long lo1 = r < a ? L(r + 1, 1) : 0, hi1 = lo1;
    for (u64 j2 = 2; j2 <= m; ++j2) {
      // j1 ranges over 1..j2-1
      dL = dL && std::max(hi - L(r, j2), L(r, j2) - lo) <= 1;
      if (r < a) shift = std::max({shift, hi1 - L(r, j2), L(r, j2) - lo1});
      lo = std::min(lo, L(r, j2)), hi = std::max(hi, L(r, j2));
      if (r < a) lo1 = std::min(lo1, L(r + 1, j2)), hi1 = std::max(hi1, L(r + 1, j2));
    }
  }
  rep.pass_fail("chain_length_spread", dN);
  rep.pass_fail("segment_spread", dL);
  // The shifted spread ||L_{r+1}(j1)| - |L_r(j2)|| is often quoted as 2, but 1 + R_{r+1,j1} + sum_{i<=r}(R_{i,j1} - R_{i,j2})
  // reaches 3 whenever R_{r+1,j1} = 1 and the row-prefix sums differ by one.
  rep.pass_fail("segment_shift_spread", shift <= 3, std::to_string(shift));
  rep.reported("segment_shift_max", std::to_string(shift));

  // Equal positions on different chains, and rows along a chain.
  u64 minlen = UINT64_MAX;
  for (u64 i = 1; i <= a; ++i) minlen = std::min(minlen, f.length(i));
  bool g = true, h = true;
  for (u64 p = 1; p <= minlen; ++p) {
    u32 lo = UINT32_MAX, hi = 0;
    for (u64 i = 1; i <= a; ++i) lo = std::min(lo, f.at(i, p).col), hi = std::max(hi, f.at(i, p).col);
    g = g && hi - lo <= 1;
  }
  for (u64 i = 1; i <= a; ++i) {
    u32 lo = UINT32_MAX, hi = 0;
    for (u64 p = 1; p <= f.length(i); ++p) lo = std::min(lo, f.at(i, p).row), hi = std::max(hi, f.at(i, p).row);
    h = h && hi - lo <= 2;
  }
  rep.pass_fail("cross_chain_columns", g);
  rep.pass_fail("chain_row_span", h);

  // A double point of chain r in column j.
  bool ii = true;
  for (u64 r = 1; r < a; ++r)
    for (u64 j = 1; j < m; ++j)
      if (R(r, j) == 1) ii = ii && L(r, j) >= L(r, j + 1) && N(r, j) >= N(r + 1, j);
  rep.pass_fail("double_point_shift", ii);

  // Edges of G(a_1, N_im), i.e. chain steps and rungs.
  long long drow = 0, dcol = 0, dsum = 0;
  auto edge = [&](Cell x, Cell y) {
    long long r = std::abs(static_cast<long long>(x.row) - y.row);
    long long c = std::abs(static_cast<long long>(x.col) - y.col);
    drow = std::max(drow, r), dcol = std::max(dcol, c), dsum = std::max(dsum, r + c);
  };
  for (u64 i = 1; i <= a; ++i) {
    for (u64 p = 1; p < f.length(i); ++p) edge(f.at(i, p), f.at(i, p + 1));
    if (i < a)
      for (u64 p = 1; p <= std::min(f.length(i), f.length(i + 1)); ++p) edge(f.at(i, p), f.at(i + 1, p));
  }
  rep.pass_fail("edge_row_diff", drow <= 3, num(drow));
  rep.pass_fail("edge_col_diff", dcol <= 1, num(dcol));
  rep.reported("edge_row_plus_col_max", num(dsum));

  // Segments of p consecutive points span column counts within one.
  bool segd = true;
  for (u64 p = 1; p <= minlen; ++p) {
    u64 lo = UINT64_MAX, hi = 0;
    for (u64 i = 1; i <= a; ++i)
      for (u64 s = 1; s + p - 1 <= f.length(i); ++s) {
        u64 span = f.at(i, s + p - 1).col - f.at(i, s).col + 1;
        lo = std::min(lo, span), hi = std::max(hi, span);
      }
    segd = segd && hi - lo <= 1;
  }
  rep.pass_fail("segment_column_counts", segd);
  return rep;
}

Report check_f2(const Embedding2D& emb) {
  Report rep;
  const GridSpec& spec = emb.spec;
  const ChainMap& f = emb.f;
  const u64 H = f.height(), m = f.columns(), u2 = spec.level_budget(2);
  const u64 total = spec.total();

  // Containment in Y_2^(m) and coverage of the first u_2 - 1 columns.
  std::vector<std::uint8_t> hit(H * m, 0);
  bool inj = true, inside = true;
  u32 maxcol = 0;
  for (Rank v = 0; v < total; ++v) {
    Cell c = emb.image[v];
    if (c.row < 1 || c.row > H || c.col < 1 || c.col > m) {
      inside = false;
      continue;
    }
    auto& h = hit[(c.col - 1) * H + c.row - 1];
    inj = inj && !h;
    h = 1;
    maxcol = std::max(maxcol, c.col);
  }
  bool covered = true;
  for (u64 idx = 0; idx < (u2 - 1) * H; ++idx) covered = covered && hit[idx];
  rep.pass_fail("f2.injective", inj);
  rep.pass_fail("contained", inside && maxcol <= u2, num(maxcol));
  rep.pass_fail("covers_prefix_columns", covered);

  // Page prefixes: r' = last column touched by D_2^(r); earlier columns full.
  if (spec.k() >= 3) {
    const u64 P2 = spec.pages(2), per_page = spec.prefix(2);
    std::vector<u64> colmax_page(m + 1, 0);  // largest page reaching each column, then prefix max
    std::vector<u32> page_maxcol(P2 + 1, 0);
    for (Rank v = 0; v < total; ++v) {
      u64 pg = page_of(spec, v, 2);
      Cell c = emb.image[v];
      colmax_page[c.col] = std::max(colmax_page[c.col], pg);
      page_maxcol[pg] = std::max(page_maxcol[pg], c.col);
    }
    for (u64 c = 2; c <= m; ++c) colmax_page[c] = std::max(colmax_page[c], colmax_page[c - 1]);
    bool prefix = true, gap = true;
    u32 rp = 0;
    u64 worst = 0;
    for (u64 r = 1; r <= P2; ++r) {
      rp = std::max(rp, page_maxcol[r]);
      if (rp > 1) prefix = prefix && colmax_page[rp - 1] <= r;
      u64 missing = rp * H - r * per_page;
      worst = std::max(worst, missing);
      gap = gap && missing < H;
    }
    rep.pass_fail("page_prefix_covers", prefix);
    rep.pass_fail("page_prefix_gap", gap, num(static_cast<long long>(worst)));
  }

  // Grid edges in the first two dimensions are chain rungs and chain steps.
  long long drow = 0, dcol = 0;
  for (Rank v = 0; v < total; ++v)
    for (int i = 1; i <= 2; ++i) {
      if (coord_of(spec, v, i) + 1 >= spec.a(i)) continue;
      Cell x = emb.image[v], y = emb.image[v + spec.prefix(i - 1)];
      drow = std::max(drow, std::abs(static_cast<long long>(x.row) - y.row));
      dcol = std::max(dcol, std::abs(static_cast<long long>(x.col) - y.col));
    }
  rep.pass_fail("grid_edge_row_diff", drow <= 3, num(drow));
  rep.pass_fail("grid_edge_col_diff", dcol <= 1, num(dcol));
  return rep;
}

}  // namespace gridcube
