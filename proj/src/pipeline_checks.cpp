#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "gridcube/pipeline.hpp"

namespace gridcube {

namespace {

std::string stage_key(int i, const std::string& what) { return "stage" + std::to_string(i) + "." + what; }

// Tally helper: records the first violation as the note.
struct Tally {
  u64 bad = 0;
  std::string first;
  void fail(const std::string& why) {
    if (bad++ == 0) first = why;
  }
  bool ok() const { return bad == 0; }
  std::string note() const { return bad ? std::to_string(bad) + " violations, first: " + first : std::string{}; }
};

void check_injective(Report& rep, const GridSpec& spec, const StageEmbedding& st) {
  const int i = st.stage;
  std::vector<u64> keys(spec.total());
  Tally range;
  for (Rank v = 0; v < spec.total(); ++v) {
    auto z = st.at(v);
    u64 key = 0;
    for (int j = 1; j < i; ++j) {
      const u64 lim = u64{1} << spec.width(j);
      if (z[j - 1] < 1 || z[j - 1] > lim) range.fail("rank " + std::to_string(v) + " coord " + std::to_string(j));
      key |= static_cast<u64>(z[j - 1] - 1) << spec.e(j - 1);
    }
    if (z[i - 1] < 1 || z[i - 1] > st.levels) range.fail("rank " + std::to_string(v) + " above u_i");
    keys[v] = key + (static_cast<u64>(z[i - 1] - 1) << spec.e(i - 1));
  }
  std::sort(keys.begin(), keys.end());
  const bool inj = std::adjacent_find(keys.begin(), keys.end()) == keys.end();
  rep.pass_fail(stage_key(i, "injective"), inj);
  rep.pass_fail(stage_key(i, "range"), range.ok(), range.note());
  u32 top = 0;
  for (Rank v = 0; v < spec.total(); ++v) top = std::max(top, st(v, i));
  rep.pass_fail(stage_key(i, "top_level"), top <= st.levels,
                std::to_string(top) + " vs u=" + std::to_string(st.levels));
}

// Budget identity ceil(r A / 2^{e_{i-1}}) + s_i(1) + ... + s_i(r) = r 2^{e_i-e_{i-1}},
// also checked through the nonblank counts that F(i) actually produces.
void check_budget(Report& rep, const GridSpec& spec, const BlankPlan& plan) {
  const int i = plan.stage;
  const u64 A = spec.prefix(i), D = u64{1} << spec.e(i - 1);
  Tally t;
  std::int64_t acc = 0;
  for (u64 r = 1; r <= plan.sections(); ++r) {
    acc += plan.s[r - 1];
    const unsigned __int128 need = (static_cast<unsigned __int128>(r) * A + D - 1) / D;
    if (need + static_cast<u64>(acc) != r * plan.section_size) t.fail("r=" + std::to_string(r));
    if (plan.nb_before[r] != need) t.fail("nonblank count r=" + std::to_string(r));
  }
  rep.pass_fail(stage_key(i, "budget_identity"), t.ok(), t.note());
}

}  // namespace

Report check_pipeline(const Pipeline& p, u64 min_side) {
  Report rep;
  const GridSpec& spec = p.spec();
  const int k = spec.k();
  const u64 N = spec.total();
  const bool big = *std::min_element(spec.dims().begin(), spec.dims().end()) >= min_side;

  if (!p.retained()) {
    check_injective(rep, spec, p.fk());
    for (int i = 2; i < k; ++i) check_budget(rep, spec, p.plan(i));
    return rep;
  }

  for (int i = 2; i <= k; ++i) check_injective(rep, spec, p.stage(i));
  for (int i = 2; i < k; ++i) check_budget(rep, spec, p.plan(i));

  // Prefix stability, and the final coordinate is the inflation column.
  {
    Tally a1, a2;
    const auto& fk = p.fk();
    for (int i = 2; i < k; ++i) {
      const auto& st = p.stage(i);
      const auto& inf = p.inflation(i);
      for (Rank v = 0; v < N; ++v) {
        for (int j = 1; j < i; ++j)
          if (st(v, j) != fk(v, j)) a1.fail("stage " + std::to_string(i) + " rank " + std::to_string(v));
        if (fk(v, i) != inf.column[v]) a2.fail("stage " + std::to_string(i) + " rank " + std::to_string(v));
      }
    }
    rep.pass_fail("prefix_stable", a1.ok(), a1.note());
    rep.pass_fail("last_is_zero_column", a2.ok(), a2.note());
  }

  // Per inflated stage i: level coverage, section containment, subpage
  // spreads, height spreads and the edge difference bound.
  for (int i = 2; i < k; ++i) {
    const auto& plan = p.plan(i);
    const auto& inf = p.inflation(i);
    const auto& st = p.stage(i);
    const auto& next = p.stage(i + 1);
    const u64 P = plan.sections();
    const u64 D = u64{1} << spec.e(i - 1);

    // Every nonblank level outside the last section is full.
    {
      std::vector<u64> fill(plan.nonblank() + 1, 0);
      for (Rank v = 0; v < N; ++v) ++fill[st(v, i)];
      Tally t;
      for (u64 z = 1; z <= plan.nonblank(); ++z)
        if (plan.nb_section[z - 1] < P && fill[z] != D) t.fail("level " + std::to_string(z));
      rep.gated(stage_key(i, "nonblank_levels_full"), t.ok(), big, t.note());
    }

    // Section containment: the section is page_i or page_i - 1.
    {
      Tally f1, f2;
      std::vector<bool> strict(P + 1, false);
      for (Rank v = 0; v < N; ++v) {
        const u64 pg = page_of(spec, v, i), s = inf.section[v];
        if (s > pg) f1.fail("rank " + std::to_string(v));
        if (s + 1 < pg) f2.fail("rank " + std::to_string(v));
        if (s == pg) strict[pg] = true;
      }
      Tally proper;
      for (u64 r = 2; r <= P; ++r)
        if (!strict[r]) proper.fail("r=" + std::to_string(r - 1));
      rep.gated(stage_key(i, "inflated_within_sections"), f1.ok(), big, f1.note());
      rep.gated(stage_key(i, "sections_covered"), f2.ok() && proper.ok(), big, f2.note() + proper.note());
      rep.gated(stage_key(i, "inflated_section_lag"), f1.ok() && f2.ok(), big, f1.note() + f2.note());
    }

    // Within each subpage index q = x_i, nonblank ranks agree
    // up to 3 under wraparound.
    {
      const u64 ai = spec.a(i);
      std::vector<std::int64_t> lo(ai, std::numeric_limits<std::int64_t>::max());
      std::vector<std::int64_t> hi(ai, std::numeric_limits<std::int64_t>::min());
      for (Rank v = 0; v < N; ++v) {
        const u64 q = coord_of(spec, v, i), s = inf.section[v];
        std::int64_t nu = inf.ordinal[v];
        if (s + 1 == page_of(spec, v, i)) nu -= static_cast<std::int64_t>(plan.nonblank_in(s));
        lo[q] = std::min(lo[q], nu);
        hi[q] = std::max(hi[q], nu);
      }
      std::int64_t spread = 0;
      for (u64 q = 0; q < ai; ++q) spread = std::max(spread, hi[q] - lo[q]);
      std::int64_t worst = spread;
      if (spread > 3) {
        // The signed form is only sufficient; fall back to the exact
        // three-way distance over distinct (section, rank) pairs.
        worst = 0;
        std::vector<std::vector<std::pair<u32, u32>>> seen(ai);
        for (Rank v = 0; v < N; ++v) seen[coord_of(spec, v, i)].emplace_back(inf.section[v], inf.ordinal[v]);
        for (auto& g : seen) {
          std::sort(g.begin(), g.end());
          g.erase(std::unique(g.begin(), g.end()), g.end());
          for (size_t a = 0; a < g.size(); ++a)
            for (size_t b = a + 1; b < g.size(); ++b)
              worst = std::max(worst, nu_distance(plan, g[a].first, g[a].second, g[b].first, g[b].second));
        }
      }
      rep.gated(stage_key(i, "nu_spread"), worst <= 3, big, "max " + std::to_string(worst));
    }

    // Heights at stage i+1 by source section and by page.
    {
      std::vector<u32> smin(P + 2, std::numeric_limits<u32>::max()), smax(P + 2, 0);
      std::vector<u32> pmin(P + 2, std::numeric_limits<u32>::max()), pmax(P + 2, 0);
      for (Rank v = 0; v < N; ++v) {
        const u32 h = next(v, i + 1);
        const u64 s = inf.section[v], pg = page_of(spec, v, i);
        smin[s] = std::min(smin[s], h);
        smax[s] = std::max(smax[s], h);
        pmin[pg] = std::min(pmin[pg], h);
        pmax[pg] = std::max(pmax[pg], h);
      }
      auto spread = [](const std::vector<u32>& mn, const std::vector<u32>& mx, u64 P, bool adjacent) {
        std::int64_t w = 0;
        for (u64 r = 1; r <= P; ++r) {
          if (mx[r] == 0) continue;
          w = std::max<std::int64_t>(w, std::int64_t{mx[r]} - mn[r]);
          if (adjacent && r < P && mx[r + 1] != 0) {
            w = std::max<std::int64_t>(w, std::int64_t{mx[r + 1]} - mn[r]);
            w = std::max<std::int64_t>(w, std::int64_t{mx[r]} - mn[r + 1]);
          }
        }
        return w;
      };
      auto same_s = spread(smin, smax, P, false), adj_s = spread(smin, smax, P, true);
      auto same_p = spread(pmin, pmax, P, false), adj_p = spread(pmin, pmax, P, true);
      rep.gated(stage_key(i, "height_by_section_same"), same_s <= 1, big, std::to_string(same_s));
      rep.gated(stage_key(i, "height_by_section_adjacent"), adj_s <= 2, big, std::to_string(adj_s));
      rep.gated(stage_key(i, "height_by_page_same"), same_p <= 2, big, std::to_string(same_p));
      rep.gated(stage_key(i, "height_by_page_adjacent"), adj_p <= 3, big, std::to_string(adj_p));
    }

    // Along grid edges: |f_i diff| <= e gives cyclic final diff <= 2e+2.
    {
      Tally t;
      const auto& fk = p.fk();
      const std::int64_t n = std::int64_t{1} << spec.width(i);
      for (Rank v = 0; v < N; ++v)
        for (int d = 1; d <= k; ++d) {
          if (coord_of(spec, v, d) + 1 >= spec.a(d)) continue;
          const Rank w = v + spec.prefix(d - 1);
          const std::int64_t e = std::abs(std::int64_t{st(v, i)} - st(w, i));
          std::int64_t c = std::abs(std::int64_t{fk(v, i)} - fk(w, i));
          c = std::min(c, n - c);
          if (c > 2 * e + 2) t.fail("rank " + std::to_string(v) + " dim " + std::to_string(d));
        }
      rep.gated(stage_key(i, "edge_diff_2e_plus_2"), t.ok(), big, t.note());
    }
  }

  // Stack properties at stages 3..k.
  for (int t = 3; t <= k; ++t) {
    const auto& tab = p.stacks(t);
    const auto& st = p.stage(t);
    const auto& prevplan = p.plan(t - 1);
    const auto& sec = p.inflation(t - 1).section;
    const u64 P = spec.pages(t - 1);
    const u64 D = u64{1} << spec.e(t - 1);
    const u64 A = tab.start.size() - 1;
    const int lowbits = spec.e(t - 2);

    // Sections strictly increase and pages weakly
    // increase up every stack.
    Tally g, mono;
    for (u64 a = 0; a < A; ++a) {
      auto s = tab.stack(a);
      for (size_t h = 1; h < s.size(); ++h) {
        if (sec[s[h]] <= sec[s[h - 1]]) g.fail("address " + std::to_string(a));
        if (page_of(spec, s[h], t - 1) < page_of(spec, s[h - 1], t - 1)) mono.fail("address " + std::to_string(a));
      }
    }
    rep.pass_fail(stage_key(t, "stack_sections_increase"), g.ok(), g.note());
    rep.gated(stage_key(t, "stack_pages_monotone"), mono.ok(), big, mono.note());

    // Sweep r over sections; stacks are section- and page-sorted, so the
    // counts up to r are pointer positions.
    std::vector<u32> cs(A, 0), cp(A, 0);
    std::vector<u64> bracket(P + 1, 0);
    Tally d2, d3, e1, b61, c61;
    std::string c61_first;
    for (u64 r = 1; r <= P; ++r) {
      u64 top = 0;
      for (u64 a = 0; a < A; ++a) {
        auto s = tab.stack(a);
        while (cs[a] < s.size() && sec[s[cs[a]]] <= r) ++cs[a];
        while (cp[a] < s.size() && page_of(spec, s[cp[a]], t - 1) <= r) ++cp[a];
        top = std::max<u64>(top, cs[a]);
      }
      bracket[r] = top;
      const u64 l = stack_bound(spec, t, r);
      if (top != l) e1.fail("r=" + std::to_string(r) + " [r]=" + std::to_string(top) + " l=" + std::to_string(l));
      const unsigned __int128 slack = static_cast<unsigned __int128>(l) * D -
                                      static_cast<unsigned __int128>(r) * spec.prefix(t - 1);
      if (slack >= D) e1.fail("slack r=" + std::to_string(r));
      u64 upper_two = 0;
      for (u64 a = 0; a < A; ++a) {
        if (r < P) {
          if (cs[a] + 1 < top) d2.fail("r=" + std::to_string(r) + " address " + std::to_string(a));
          const u64 c = (a >> lowbits) + 1;
          if (cs[a] != prevplan.zeros_through(r, c)) d3.fail("r=" + std::to_string(r) + " address " + std::to_string(a));
        }
        if (cp[a] > top || cp[a] + 2 < top) b61.fail("r=" + std::to_string(r) + " address " + std::to_string(a));
        const u64 lo = top >= 2 ? top - 2 : 0;
        upper_two += std::min<u64>(cp[a], top) > lo ? std::min<u64>(cp[a], top) - lo : 0;
      }
      if (r >= 2) {
        if (upper_two <= D) c61.fail("r=" + std::to_string(r) + " got " + std::to_string(upper_two));
      } else {
        c61_first = std::to_string(upper_two) + " vs " + std::to_string(D);
      }
    }
    rep.gated(stage_key(t, "heights_two_values"), d2.ok(), big, d2.note());
    rep.gated(stage_key(t, "heights_match_zero_counts"), d3.ok(), big, d3.note());
    rep.gated(stage_key(t, "max_height_is_bound"), e1.ok(), big, e1.note());
    rep.gated(stage_key(t, "page_heights_band"), b61.ok(), big, b61.note());
    rep.gated(stage_key(t, "top_levels_fill"), c61.ok(), big, c61.note());
    // At r = 1 the bound would need more points than one level holds.
    rep.reported(stage_key(t, "top_levels_fill_first"), c61_first);
    rep.pass_fail(stage_key(t, "top_is_u"), bracket[P] == st.levels,
                  std::to_string(bracket[P]) + " vs " + std::to_string(st.levels));

    // Containment of page prefixes.
    {
      Tally e2a, e2b;
      const u64 Pt = spec.pages(t);
      std::vector<u32> maxp(P + 1, 0), maxq(Pt + 1, 0);
      for (Rank v = 0; v < N; ++v) {
        const u32 h = st(v, t);
        auto& m1 = maxp[page_of(spec, v, t - 1)];
        m1 = std::max(m1, h);
        auto& m2 = maxq[page_of(spec, v, t)];
        m2 = std::max(m2, h);
      }
      u32 run = 0;
      for (u64 r = 1; r <= P; ++r) {
        run = std::max(run, maxp[r]);
        if (run > stack_bound(spec, t, r)) e2a.fail("r=" + std::to_string(r));
      }
      run = 0;
      for (u64 r = 1; r <= Pt; ++r) {
        run = std::max(run, maxq[r]);
        const unsigned __int128 num = static_cast<unsigned __int128>(r) * spec.prefix(t);
        if (run > static_cast<u64>((num + D - 1) / D)) e2b.fail("r=" + std::to_string(r));
      }
      rep.gated(stage_key(t, "prev_pages_within_bound"), e2a.ok(), big, e2a.note());
      rep.gated(stage_key(t, "pages_within_bound"), e2b.ok(), big, e2b.note());
    }

    // The points of one (t-1)-page inside one stack.
    {
      Tally a1, a2, a3;
      for (u64 a = 0; a < A; ++a) {
        auto s = tab.stack(a);
        std::vector<std::pair<u64, size_t>> pages;
        for (size_t h = 0; h < s.size(); ++h) {
          const u64 r = page_of(spec, s[h], t - 1);
          if (h + 1 > bracket[r] || h + 3 < bracket[r]) a3.fail("address " + std::to_string(a));
          pages.emplace_back(r, h);
        }
        std::sort(pages.begin(), pages.end());
        for (size_t j = 0; j < pages.size();) {
          size_t e = j;
          while (e < pages.size() && pages[e].first == pages[j].first) ++e;
          if (e - j > 2) a1.fail("address " + std::to_string(a));
          if (e - j == 2 && pages[j + 1].second != pages[j].second + 1) a2.fail("address " + std::to_string(a));
          j = e;
        }
      }
      rep.gated(stage_key(t, "stack_page_pairs"), a1.ok(), big, a1.note());
      rep.gated(stage_key(t, "stack_page_adjacent"), a2.ok(), big, a2.note());
      rep.gated(stage_key(t, "stack_page_height_band"), a3.ok(), big, a3.note());
    }
  }
  return rep;
}

}  // namespace gridcube
