#include "gridcube/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gridcube {

std::vector<std::int64_t> s_sequence(const GridSpec& spec, int i) {
  if (i < 2 || i > spec.k() - 1) throw std::invalid_argument("s_sequence stage out of range");
  using i128 = __int128;
  const i128 A = spec.prefix(i);
  const i128 D = i128{1} << spec.e(i - 1);
  const i128 n = i128{1} << spec.width(i);
  const i128 C = (A + D - 1) / D;
  const i128 phi = C * D - A;  // phi_i scaled by D
  const u64 P = spec.pages(i);
  std::vector<std::int64_t> s(P);
  for (u64 j = 1; j <= P; ++j) {
    i128 J = static_cast<i128>(j);
    s[j - 1] = static_cast<std::int64_t>(n - C + (J * phi) / D - ((J - 1) * phi) / D);
  }
  // Every prefix of sections leaves exactly enough nonblank levels.
  i128 acc = 0;
  for (u64 r = 1; r <= P; ++r) {
    acc += s[r - 1];
    i128 R = static_cast<i128>(r);
    if ((R * A + D - 1) / D + acc != R * n) throw std::logic_error("blank budget identity fails");
    if (s[r - 1] != n - C && s[r - 1] != n - C + 1) throw std::logic_error("blank count out of range");
    if (2 * s[r - 1] > n) throw std::logic_error("more than half of a section is blank");
  }
  return s;
}

Report validate_designation(const GridSpec& spec, int i, const BinaryMatrix& F) {
  Report rep;
  const auto s = s_sequence(spec, i);
  const u64 n = u64{1} << spec.width(i);
  const bool shape = F.rows() == s.size() && F.cols() == n;
  rep.pass_fail("designation.shape", shape,
                std::to_string(F.rows()) + "x" + std::to_string(F.cols()) + " expected " +
                    std::to_string(s.size()) + "x" + std::to_string(n));
  if (!shape) return rep;
  auto b = check_balance(F, s);
  rep.pass_fail("designation.row_sums", b.row_sums);
  rep.pass_fail("designation.column_spread", b.column_spread <= 1, std::to_string(b.column_spread));
  rep.pass_fail("designation.row_spread", b.row_spread <= 2, std::to_string(b.row_spread));
  return rep;
}

BlankPlan make_blank_plan(const GridSpec& spec, int i, BinaryMatrix F) {
  auto rep = validate_designation(spec, i, F);
  if (!rep.ok()) throw std::invalid_argument("F(" + std::to_string(i) + ") rejected:\n" + rep.str());
  BlankPlan plan;
  plan.stage = i;
  plan.s = s_sequence(spec, i);
  plan.section_size = u64{1} << spec.width(i);
  plan.F = std::move(F);
  const u64 P = plan.sections(), n = plan.section_size;
  plan.nb_before.assign(P + 1, 0);
  plan.zcol_.assign((P + 1) * n, 0);
  for (u64 r = 1; r <= P; ++r) {
    u32 b = 0;
    for (u64 c = 1; c <= n; ++c) {
      const bool blank = plan.F.at(r - 1, c - 1);
      plan.zcol_[r * n + c - 1] = plan.zcol_[(r - 1) * n + c - 1] + (blank ? 0 : 1);
      if (blank) continue;
      plan.nb_section.push_back(static_cast<u32>(r));
      plan.nb_column.push_back(static_cast<u32>(c));
      plan.nb_rank.push_back(++b);
    }
    plan.nb_before[r] = plan.nb_column.size();
  }
  if (plan.nonblank() != spec.level_budget(i)) throw std::logic_error("nonblank levels differ from u_i");
  return plan;
}

BlankPlan build_blank_plan(const GridSpec& spec, int i) {
  RoundingSpec rs{s_sequence(spec, i), std::int64_t{1} << spec.width(i)};
  return make_blank_plan(spec, i, build_FX(rs));
}

u64 address_of(const GridSpec& spec, std::span<const u32> z, int j) {
  u64 a = 0;
  for (int t = 1; t <= j; ++t) a |= static_cast<u64>(z[static_cast<size_t>(t - 1)] - 1) << spec.e(t - 1);
  return a;
}

Inflation inflate(const GridSpec& spec, const StageEmbedding& prev, const BlankPlan& plan) {
  const int i = prev.stage;
  if (plan.stage != i) throw std::invalid_argument("plan and stage differ");
  const u64 total = spec.total();
  Inflation inf;
  inf.stage = i;
  inf.level.resize(total);
  inf.section.resize(total);
  inf.ordinal.resize(total);
  inf.column.resize(total);
  for (Rank v = 0; v < total; ++v) {
    const u64 z = prev(v, i);
    if (z < 1 || z > plan.nonblank()) throw std::logic_error("level beyond the nonblank budget");
    const u32 r = plan.nb_section[z - 1], c = plan.nb_column[z - 1];
    inf.section[v] = r;
    inf.column[v] = c;
    inf.ordinal[v] = plan.nb_rank[z - 1];
    inf.level[v] = (r - 1) * plan.section_size + c;
  }
  return inf;
}

StageEmbedding stack(const GridSpec& spec, const StageEmbedding& prev, const Inflation& inf,
                     const BlankPlan& plan) {
  const int i = prev.stage;
  const u64 total = spec.total(), P = plan.sections();
  // Visit points section by section so n_y counts sections 1..r.
  std::vector<u64> first(P + 2, 0);
  for (Rank v = 0; v < total; ++v) ++first[inf.section[v] + 1];
  for (u64 r = 1; r <= P + 1; ++r) first[r] += first[r - 1];
  std::vector<Rank> order(total);
  for (Rank v = 0; v < total; ++v) order[first[inf.section[v]]++] = v;

  StageEmbedding next;
  next.stage = i + 1;
  next.levels = spec.level_budget(i + 1);
  next.coords.resize(total * static_cast<u64>(i + 1));
  std::vector<u32> count(u64{1} << spec.e(i), 0);
  for (Rank v : order) {
    auto z = prev.at(v);
    u32* out = next.coords.data() + v * static_cast<u64>(i + 1);
    std::copy(z.begin(), z.end() - 1, out);
    out[i - 1] = inf.column[v];
    const u64 addr = address_of(spec, {out, static_cast<size_t>(i)}, i);
    out[i] = ++count[addr];
  }
  return next;
}

namespace {

StackTable make_table(const GridSpec& spec, const StageEmbedding& st) {
  const int t = st.stage;
  StackTable tab;
  tab.stage = t;
  const u64 A = u64{1} << spec.e(t - 1);
  tab.start.assign(A + 1, 0);
  const u64 total = spec.total();
  for (Rank v = 0; v < total; ++v) ++tab.start[address_of(spec, st.at(v), t - 1) + 1];
  for (u64 a = 1; a <= A; ++a) tab.start[a] += tab.start[a - 1];
  tab.point.assign(total, total);
  for (Rank v = 0; v < total; ++v) {
    const u64 addr = address_of(spec, st.at(v), t - 1);
    const u64 h = st(v, t);
    if (h < 1 || h > tab.height(addr) || tab.point[tab.start[addr] + h - 1] != total)
      throw std::logic_error("stack heights are not contiguous");
    tab.point[tab.start[addr] + h - 1] = v;
  }
  return tab;
}

}  // namespace

Pipeline::Pipeline(GridSpec spec, const PipelineOptions& opt)
    : spec_(std::move(spec)), base_(build_f2(spec_)), retained_(opt.retain_stages) {
  for (const auto& [i, F] : opt.seeds)
    if (i < 2 || i > spec_.k() - 1)
      throw std::invalid_argument("seed matrix for stage " + std::to_string(i) + " has no use");
  StageEmbedding s2;
  s2.stage = 2;
  s2.levels = spec_.level_budget(2);
  s2.coords.resize(spec_.total() * 2);
  for (Rank v = 0; v < spec_.total(); ++v) {
    s2.coords[2 * v] = base_.image[v].row;
    s2.coords[2 * v + 1] = base_.image[v].col;
  }
  stages_.push_back(std::move(s2));
  if (!retained_) base_.image.clear();

  for (int i = 2; i < spec_.k(); ++i) {
    auto seed = opt.seeds.find(i);
    plans_.push_back(seed != opt.seeds.end() ? make_blank_plan(spec_, i, seed->second)
                                             : build_blank_plan(spec_, i));
    inflations_.push_back(inflate(spec_, stages_.back(), plans_.back()));
    stages_.push_back(stack(spec_, stages_.back(), inflations_.back(), plans_.back()));
    if (retained_) {
      tables_.push_back(make_table(spec_, stages_.back()));
    } else {
      stages_[stages_.size() - 2] = StageEmbedding{};
      inflations_.back() = Inflation{};
    }
  }
}

const StageEmbedding& Pipeline::stage(int i) const {
  const auto& s = stages_.at(static_cast<size_t>(i - 2));
  if (s.stage != i) throw std::logic_error("stage " + std::to_string(i) + " was not retained");
  return s;
}

Pipeline build_fk(const GridSpec& spec, const PipelineOptions& opt) { return Pipeline(spec, opt); }

std::vector<u32> stack_heights(const Pipeline& p, int t, u64 r) {
  const GridSpec& spec = p.spec();
  if (t < 3 || t > spec.k()) throw std::invalid_argument("stacks exist at stages 3..k");
  if (r < 1 || r > spec.pages(t - 1)) throw std::invalid_argument("section prefix out of range");
  const auto& tab = p.stacks(t);
  const auto& sec = p.inflation(t - 1).section;
  std::vector<u32> h(tab.start.size() - 1, 0);
  for (u64 a = 0; a + 1 < tab.start.size(); ++a)
    for (Rank v : tab.stack(a)) h[a] += sec[v] <= r;
  return h;
}

u64 stack_bound(const GridSpec& spec, int i, u64 r) {
  const unsigned __int128 num = static_cast<unsigned __int128>(r) * spec.prefix(i - 1);
  const u64 D = u64{1} << spec.e(i - 1);
  return static_cast<u64>((num + D - 1) / D);
}

std::int64_t nu_distance(const BlankPlan& plan, u64 r, std::int64_t b1, u64 s, std::int64_t b2) {
  const auto mr = static_cast<std::int64_t>(plan.nonblank_in(r));
  const auto ms = static_cast<std::int64_t>(plan.nonblank_in(s));
  return std::min({std::abs(b2 - b1), mr - b1 + b2, ms - b2 + b1});
}

std::string dump_stage(const Pipeline& p, int i) {
  const auto& st = p.stage(i);
  std::ostringstream os;
  os << "STAGE " << i << ' ' << st.levels << '\n';
  for (Rank v = 0; v < p.spec().total(); ++v) {
    os << v << ": (";
    auto z = st.at(v);
    for (size_t j = 0; j < z.size(); ++j) os << (j ? "," : "") << z[j];
    os << ")\n";
  }
  return os.str();
}

}  // namespace gridcube
