#pragma once

// The inductive lift f_2 -> f_3 -> ... -> f_k.
//
// Image coordinates are stored exactly as printed in formulas: f_i(v)_j is a
// 1-based value (a row of Y_2, a residue N_r(b), a stack height). Grid
// vertices are addressed by rank. Stages, sections, pages and ordinals are
// 1-based throughout.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gridcube/embed2d.hpp"
#include "gridcube/grid.hpp"
#include "gridcube/report.hpp"
#include "gridcube/rounding.hpp"

namespace gridcube {

// s_i(1..P_i), 2 <= i <= k-1. The budget identity and the range of values
// are checked before returning.
std::vector<std::int64_t> s_sequence(const GridSpec& spec, int i);

struct BlankPlan {
  int stage = 0;
  std::vector<std::int64_t> s;  // s[r-1] = s_i(r)
  BinaryMatrix F;               // 1 marks a blank level
  u64 section_size = 0;         // 2^{e_i - e_{i-1}}
  // Nonblank levels in increasing order, indexed by ordinal - 1.
  std::vector<u32> nb_section;
  std::vector<u32> nb_column;  // N_r(b)
  std::vector<u32> nb_rank;    // b
  std::vector<u64> nb_before;  // nonblank levels in sections 1..r-1, at index r-1

  u64 sections() const noexcept { return F.rows(); }
  u64 nonblank() const noexcept { return nb_column.size(); }
  u64 nonblank_in(u64 r) const { return nb_before[r] - nb_before[r - 1]; }
  // Zeros in column c of F through row r.
  u64 zeros_through(u64 r, u64 c) const { return zcol_[r * section_size + c - 1]; }

  std::vector<u64> zcol_;  // (P_i + 1) x section_size prefix table
};

// F(i) from the rounding module, plus the derived tables.
BlankPlan build_blank_plan(const GridSpec& spec, int i);
// Same with an externally supplied F(i); throws unless it has the right
// shape and passes the designation contracts.
BlankPlan make_blank_plan(const GridSpec& spec, int i, BinaryMatrix F);
// Shape, exact row sums and balance of a candidate F(i).
Report validate_designation(const GridSpec& spec, int i, const BinaryMatrix& F);

struct StageEmbedding {
  int stage = 0;
  u64 levels = 0;           // u_i
  std::vector<u32> coords;  // stage values per vertex

  std::span<const u32> at(Rank v) const {
    return {coords.data() + v * static_cast<u64>(stage), static_cast<size_t>(stage)};
  }
  u32 operator()(Rank v, int j) const { return coords[v * static_cast<u64>(stage) + static_cast<u64>(j - 1)]; }
};

// (I_i o f_i)(v): last coordinate moved to its nonblank level.
struct Inflation {
  int stage = 0;
  std::vector<u64> level;    // z_i'
  std::vector<u32> section;  // r
  std::vector<u32> ordinal;  // b, the nonblank rank within section r
  std::vector<u32> column;   // N_r(b)
};

Inflation inflate(const GridSpec& spec, const StageEmbedding& prev, const BlankPlan& plan);
StageEmbedding stack(const GridSpec& spec, const StageEmbedding& prev, const Inflation& inf,
                     const BlankPlan& plan);

struct PipelineOptions {
  bool retain_stages = true;
  std::map<int, BinaryMatrix> seeds;  // F(i) overrides keyed by stage
};

// Address of the first j coordinates of an image point, 0 <= address < 2^{e_j}.
u64 address_of(const GridSpec& spec, std::span<const u32> z, int j);

// Points of stage t grouped by address of their first t-1 coordinates, each
// group in height order.
struct StackTable {
  int stage = 0;
  std::vector<u64> start;  // 2^{e_{t-1}} + 1 offsets
  std::vector<Rank> point;

  u64 height(u64 addr) const { return start[addr + 1] - start[addr]; }
  std::span<const Rank> stack(u64 addr) const {
    return {point.data() + start[addr], static_cast<size_t>(height(addr))};
  }
};

class Pipeline {
 public:
  Pipeline(GridSpec spec, const PipelineOptions& opt = {});

  const GridSpec& spec() const noexcept { return spec_; }
  const Embedding2D& base() const noexcept { return base_; }
  bool retained() const noexcept { return retained_; }
  const StageEmbedding& stage(int i) const;
  const StageEmbedding& fk() const { return stages_.back(); }
  const BlankPlan& plan(int i) const { return plans_.at(static_cast<size_t>(i - 2)); }
  const Inflation& inflation(int i) const { return inflations_.at(static_cast<size_t>(i - 2)); }
  const StackTable& stacks(int t) const { return tables_.at(static_cast<size_t>(t - 3)); }

 private:
  GridSpec spec_;
  Embedding2D base_;
  bool retained_;
  std::vector<BlankPlan> plans_;
  std::vector<Inflation> inflations_;
  std::vector<StageEmbedding> stages_;
  std::vector<StackTable> tables_;
};

Pipeline build_fk(const GridSpec& spec, const PipelineOptions& opt = {});

// |Stack_t(x, r)| for every address x of <Y_{t-1}>: points of stage t whose
// source section is at most r. 1 <= r <= P_{t-1}.
std::vector<u32> stack_heights(const Pipeline& p, int t, u64 r);

// l(i,r) = ceil(r a_1...a_{i-1} / 2^{e_{i-1}}).
u64 stack_bound(const GridSpec& spec, int i, u64 r);

// Wraparound distance between nonblank-level ranks in sections r and s:
// min{|b2-b1|, m_r - b1 + b2, m_s - b2 + b1}.
std::int64_t nu_distance(const BlankPlan& plan, u64 r, std::int64_t b1, u64 s, std::int64_t b2);

// "STAGE i u_i" then "rank: (c1,...,ci)" per vertex.
std::string dump_stage(const Pipeline& p, int i);

// The invariant battery over every retained stage. Properties proved under
// large side lengths are asserted only when every a_i >= min_side.
Report check_pipeline(const Pipeline& p, u64 min_side = 5);

}  // namespace gridcube
