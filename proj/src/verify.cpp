#include "gridcube/verify.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "gridcube/parallel.hpp"

namespace gridcube {

std::vector<int> HypercubeEmbedding::windows() const {
  std::vector<int> w;
  for (const auto& l : labelings) w.push_back(l->window);
  return w;
}

std::vector<int> default_windows(const GridSpec& spec) {
  std::vector<int> w;
  for (int j = 1; j <= spec.k(); ++j) w.push_back(spec.width(j) >= base_dimension(1) ? 5 : 0);
  return w;
}

HypercubeEmbedding assemble_Hk(const GridSpec& spec, const StageEmbedding& fk,
                               std::vector<std::shared_ptr<const CubeLabeling>> labelings) {
  const int k = spec.k();
  if (fk.stage != k) throw std::invalid_argument("assemble_Hk needs the final stage");
  if (static_cast<int>(labelings.size()) != k) throw std::invalid_argument("one labeling per dimension");
  for (int j = 1; j <= k; ++j)
    if (!labelings[static_cast<size_t>(j - 1)] || labelings[static_cast<size_t>(j - 1)]->t != spec.width(j))
      throw std::invalid_argument("labeling " + std::to_string(j) + " has the wrong dimension");
  HypercubeEmbedding emb{spec, spec.cube_dim(), {}, std::move(labelings)};
  emb.label.resize(spec.total());
  for (Rank v = 0; v < spec.total(); ++v) {
    u64 x = 0;
    for (int j = 1; j <= k; ++j) {
      const auto& lab = *emb.labelings[static_cast<size_t>(j - 1)];
      const u32 c = fk(v, j);
      if (c < 1 || c > lab.size()) throw std::invalid_argument("coordinate outside the labeling domain");
      x |= static_cast<u64>(lab.decode(c)) << (emb.n - spec.e(j));
    }
    emb.label[v] = x;
  }
  return emb;
}

HypercubeEmbedding assemble_Hk(const GridSpec& spec, const StageEmbedding& fk, const std::vector<int>& windows) {
  if (static_cast<int>(windows.size()) != spec.k()) throw std::invalid_argument("one window per dimension");
  std::map<std::pair<int, int>, std::shared_ptr<const CubeLabeling>> made;
  std::vector<std::shared_ptr<const CubeLabeling>> labs;
  for (int j = 1; j <= spec.k(); ++j) {
    const std::pair key{spec.width(j), windows[static_cast<size_t>(j - 1)]};
    auto& slot = made[key];
    if (!slot) slot = std::make_shared<const CubeLabeling>(labeling_for(key.first, key.second));
    labs.push_back(slot);
  }
  return assemble_Hk(spec, fk, std::move(labs));
}

StageEmbedding decode_fk(const HypercubeEmbedding& emb) {
  const int k = emb.spec.k();
  StageEmbedding st;
  st.stage = k;
  st.levels = emb.spec.level_budget(k);
  st.coords.resize(emb.spec.total() * static_cast<u64>(k));
  for (Rank v = 0; v < emb.spec.total(); ++v)
    for (int j = 1; j <= k; ++j) st.coords[v * static_cast<u64>(k) + static_cast<u64>(j - 1)] = emb.coordinate(v, j);
  return st;
}

namespace {

// Calls edge(v, w, i0) for every grid edge with w = v + prefix(i0 - 1).
template <class Edge>
void for_edges(const GridSpec& spec, Rank b, Rank e, Edge&& edge) {
  for (Rank v = b; v < e; ++v)
    for (int d = 1; d <= spec.k(); ++d)
      if (coord_of(spec, v, d) + 1 < spec.a(d)) edge(v, v + spec.prefix(d - 1), d);
}

u64 coord_diff(u32 x, u32 y, int width, bool cyclic) {
  const u64 d = x > y ? x - y : y - x;
  return cyclic ? std::min(d, (u64{1} << width) - d) : d;
}

}  // namespace

CoordinateDiffs coordinate_diffs(const GridSpec& spec, const StageEmbedding& fk, bool cyclic, unsigned threads) {
  const int k = spec.k();
  if (threads == 0) threads = default_threads();
  std::vector<CoordinateDiffs> part(threads);
  for (auto& p : part) p.table.assign(static_cast<size_t>(k), std::vector<u64>(static_cast<size_t>(k), 0));
  parallel_for(spec.total(), threads, [&](u64 b, u64 e, unsigned w) {
    auto& t = part[w].table;
    for_edges(spec, b, e, [&](Rank x, Rank y, int i0) {
      for (int j = 1; j <= k; ++j) {
        auto& cell = t[static_cast<size_t>(j - 1)][static_cast<size_t>(i0 - 1)];
        cell = std::max(cell, coord_diff(fk(x, j), fk(y, j), spec.width(j), cyclic));
      }
    });
  });
  CoordinateDiffs out;
  out.table.assign(static_cast<size_t>(k), std::vector<u64>(static_cast<size_t>(k), 0));
  out.max_diff.assign(static_cast<size_t>(k), 0);
  for (const auto& p : part)
    for (size_t j = 0; j < static_cast<size_t>(k); ++j)
      for (size_t i = 0; i < static_cast<size_t>(k); ++i) {
        out.table[j][i] = std::max(out.table[j][i], p.table[j][i]);
        out.max_diff[j] = std::max(out.max_diff[j], out.table[j][i]);
      }
  return out;
}

u64 case_bound(int j, int i0) {
  if (j == 1) return i0 == 1 ? 3 : 2;
  if (j == 2) return i0 <= 2 ? 4 : 8;
  if (j > i0) return 6;
  if (j == i0) return 8;
  return 10;
}

DilationReport dilation(const HypercubeEmbedding& emb, unsigned threads) {
  const GridSpec& spec = emb.spec;
  const int k = spec.k();
  if (threads == 0) threads = default_threads();
  const auto fk = decode_fk(emb);
  struct Part {
    u64 edges = 0;
    std::vector<u64> hist;
    int implied = 0;
    u64 unsound = 0;
    bool within = true;
  };
  std::vector<Part> part(threads);
  const auto windows = emb.windows();
  parallel_for(spec.total(), threads, [&](u64 b, u64 e, unsigned w) {
    Part& p = part[w];
    p.hist.assign(static_cast<size_t>(emb.n) + 1, 0);
    for_edges(spec, b, e, [&](Rank x, Rank y, int) {
      ++p.edges;
      ++p.hist[static_cast<size_t>(hamming(emb.label[x], emb.label[y]))];
      int implied = 0;
      for (int j = 1; j <= k; ++j) {
        const int t = spec.width(j), win = windows[static_cast<size_t>(j - 1)];
        const u64 diff = coord_diff(fk(x, j), fk(y, j), t, true);
        int term;
        if (win == 0) {
          term = static_cast<int>(std::min<u64>(diff, static_cast<u64>(t)));
        } else if (diff <= static_cast<u64>(win)) {
          term = std::min(3, t);
        } else {
          term = t;
          p.within = false;
        }
        if (hamming(emb.block(x, j), emb.block(y, j)) > term) ++p.unsound;
        implied += term;
      }
      p.implied = std::max(p.implied, implied);
    });
  });
  DilationReport out;
  out.k = k;
  out.histogram.assign(static_cast<size_t>(emb.n) + 1, 0);
  out.all_within_window = true;
  for (const auto& p : part) {
    out.edges += p.edges;
    for (size_t d = 0; d < p.hist.size(); ++d) out.histogram[d] += p.hist[d];
    out.implied_bound = std::max(out.implied_bound, p.implied);
    out.unsound += p.unsound;
    out.all_within_window = out.all_within_window && p.within;
  }
  for (size_t d = 0; d < out.histogram.size(); ++d)
    if (out.histogram[d]) out.dilation = static_cast<int>(d);
  out.all_caterpillar = std::all_of(windows.begin(), windows.end(), [](int w) { return w > 0; });
  out.diffs = coordinate_diffs(spec, fk, true, threads);
  return out;
}

namespace {

struct Oracle {
  int n, d;
  std::vector<int> order;                   // vertices in placement order
  std::vector<std::vector<int>> placed_nb;  // neighbours placed earlier
  std::vector<u32> images;                  // cube vertices by popcount
  std::vector<int> image;
  std::vector<bool> used;

  bool place(size_t depth) {
    if (depth == order.size()) return true;
    const int v = order[depth];
    for (u32 x : images) {
      if (used[x]) continue;
      if (depth == 0 && x != 0) break;  // the cube is vertex transitive
      bool ok = true;
      for (int w : placed_nb[static_cast<size_t>(v)])
        if (hamming(x, static_cast<u32>(image[static_cast<size_t>(w)])) > d) {
          ok = false;
          break;
        }
      if (!ok) continue;
      used[x] = true;
      image[static_cast<size_t>(v)] = static_cast<int>(x);
      if (place(depth + 1)) return true;
      used[x] = false;
    }
    return false;
  }
};

}  // namespace

bool brute_force_dilation(const GridSpec& spec, int n, int d) {
  if (spec.total() > 12 || n > 4 || n < 1) throw SizeError("the oracle handles |G| <= 12 and n <= 4");
  const int N = static_cast<int>(spec.total());
  if (N > (1 << n)) return false;
  std::vector<std::vector<int>> nb(static_cast<size_t>(N));
  for_edges(spec, 0, spec.total(), [&](Rank x, Rank y, int) {
    nb[x].push_back(static_cast<int>(y));
    nb[y].push_back(static_cast<int>(x));
  });
  Oracle o{n, d, {}, std::vector<std::vector<int>>(static_cast<size_t>(N)), {}, std::vector<int>(static_cast<size_t>(N), -1),
           std::vector<bool>(size_t{1} << n, false)};
  o.order.resize(static_cast<size_t>(N));
  std::iota(o.order.begin(), o.order.end(), 0);
  std::stable_sort(o.order.begin(), o.order.end(), [&](int a, int b) { return nb[static_cast<size_t>(a)].size() > nb[static_cast<size_t>(b)].size(); });
  std::vector<int> pos(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) pos[static_cast<size_t>(o.order[static_cast<size_t>(i)])] = i;
  for (int v = 0; v < N; ++v)
    for (int w : nb[static_cast<size_t>(v)])
      if (pos[static_cast<size_t>(w)] < pos[static_cast<size_t>(v)]) o.placed_nb[static_cast<size_t>(v)].push_back(w);
  for (u32 x = 0; x < (u32{1} << n); ++x) o.images.push_back(x);
  std::stable_sort(o.images.begin(), o.images.end(), [](u32 a, u32 b) { return std::popcount(a) < std::popcount(b); });
  return o.place(0);
}

int brute_force_bandwidth(const GridSpec& spec, int n) {
  for (int d = 0; d <= n; ++d)
    if (brute_force_dilation(spec, n, d)) return d;
  return -1;
}

Report audit_embedding(const HypercubeEmbedding& emb, u64 diff_side, unsigned threads) {
  Report rep;
  const GridSpec& spec = emb.spec;
  const int k = spec.k();
  {
    std::vector<u64> l = emb.label;
    std::sort(l.begin(), l.end());
    rep.pass_fail("hk.injective", std::adjacent_find(l.begin(), l.end()) == l.end());
    rep.pass_fail("hk.inside_opt", l.empty() || l.back() < (u64{1} << emb.n));
    rep.pass_fail("hk.dimension", emb.n == ceil_log2(spec.total()),
                  std::to_string(emb.n) + " vs " + std::to_string(ceil_log2(spec.total())));
  }
  std::string ws;
  for (int w : emb.windows()) ws += (ws.empty() ? "" : " ") + std::to_string(w);
  rep.reported("hk.windows", ws);

  const auto d = dilation(emb, threads);
  const bool big = *std::min_element(spec.dims().begin(), spec.dims().end()) >= diff_side;
  u64 worst = 0;
  for (int j = 1; j <= k; ++j) {
    const u64 m = d.diffs.max_diff[static_cast<size_t>(j - 1)];
    worst = std::max(worst, m);
    rep.reported("diff.max." + std::to_string(j), std::to_string(m));
  }
  rep.gated("diff.le17", worst <= 17, big, "max " + std::to_string(worst));
  for (int j = 1; j <= k; ++j)
    for (int i0 = 1; i0 <= k; ++i0) {
      const u64 L = d.diffs.table[static_cast<size_t>(j - 1)][static_cast<size_t>(i0 - 1)];
      rep.gated("diff.L." + std::to_string(j) + "." + std::to_string(i0), L <= case_bound(j, i0), big,
                std::to_string(L) + " of " + std::to_string(case_bound(j, i0)));
    }

  std::string hist;
  for (size_t h = 0; h < d.histogram.size(); ++h)
    if (d.histogram[h]) hist += (hist.empty() ? "" : " ") + std::to_string(h) + ":" + std::to_string(d.histogram[h]);
  rep.reported("dilation.value", std::to_string(d.dilation));
  rep.reported("dilation.histogram", hist);
  rep.reported("dilation.implied_bound", std::to_string(d.implied_bound));
  rep.pass_fail("dilation.labeling_sound", d.unsound == 0, std::to_string(d.unsound) + " edge blocks");
  rep.pass_fail("dilation.within_implied", d.dilation <= d.implied_bound);
  const bool premise = d.all_caterpillar && d.all_within_window;
  rep.gated("dilation.le_3k", d.dilation <= 3 * k, premise,
            std::to_string(d.dilation) + (premise ? "" : " (premise not met)"));
  return rep;
}

Report audit(const GridSpec& spec, const AuditOptions& opt) {
  Report rep;
  const int k = spec.k();
  {
    std::string u, e;
    for (int i = 1; i <= k; ++i) u += (i > 1 ? " " : "") + std::to_string(spec.level_budget(i));
    for (int i = 0; i <= k; ++i) e += (i ? " " : "") + std::to_string(spec.e(i));
    rep.reported("grid.dims", spec.to_string());
    rep.reported("grid.exponents", e);
    rep.reported("grid.level_budgets", u);
  }
  rep.append(check_chain_map(build_chain_map(spec.a(1), spec.e(1), std::min<u64>(spec.level_budget(2), 256))),
             "embed2d.");
  PipelineOptions po;
  po.seeds = opt.seeds;
  const Pipeline p(spec, po);
  rep.append(check_f2(p.base()), "f2.");
  for (int i = 2; i < k; ++i) {
    const auto& plan = p.plan(i);
    const std::string key = "rounding.stage" + std::to_string(i) + ".";
    rep.append(validate_designation(spec, i, plan.F), key);
    const RoundingSpec rs{plan.s, static_cast<std::int64_t>(plan.section_size)};
    const auto T = rs.source();
    const auto rc = check_rounding(T, plan.F);
    rep.pass_fail(key + "rows", rc.rows);
    rep.pass_fail(key + "columns", rc.columns);
    rep.pass_fail(key + "total", rc.total);
    if (plan.F.total() > 0 && 2 * (rs.kappa() + 1) <= rs.n) {
      const auto zg = check_zero_gaps(plan.F, T);
      rep.pass_fail(key + "zero_gaps", zg.ok(),
                    std::to_string(zg.forward_window) + "/" + std::to_string(zg.forward_gap) + "/" +
                        std::to_string(zg.backward_gap) + "/" + std::to_string(zg.cross_gap));
    }
  }
  rep.append(check_pipeline(p, opt.min_side), "pipeline.");
  const auto windows = opt.windows.empty() ? default_windows(spec) : opt.windows;
  const auto emb = assemble_Hk(spec, p.fk(), windows);
  rep.pass_fail("hk.roundtrip", decode_fk(emb).coords == p.fk().coords);
  rep.append(audit_embedding(emb, opt.diff_side, opt.threads));
  return rep;
}

}  // namespace gridcube
