#pragma once

// The base map f : G(a_1) -> Y_2. Chain i of G(a_1) is the path of points
// (i,1),(i,2),...; a grid vertex x sits on chain x_1 at position kappa(x).
// Rows, columns, chains and positions are all 1-based.

#include <cstdint>
#include <string>
#include <vector>

#include "gridcube/grid.hpp"
#include "gridcube/report.hpp"

namespace gridcube {

class CirculantR {
 public:
  CirculantR(u64 a1, int e1);

  u64 a1() const noexcept { return a1_; }
  int e1() const noexcept { return e1_; }
  const std::vector<std::uint8_t>& first_column() const noexcept { return col_; }
  // R_{ij} for 1 <= i <= a_1 and any j >= 1; rows are cyclic.
  int operator()(u64 i, u64 j) const {
    return col_[static_cast<size_t>(((i + a1_ * (j / a1_ + 1) - j) % a1_))];
  }
  // S_t = floor(t (2^{e1} - a1) / a1).
  u64 S(u64 t) const { return t * ((u64{1} << e1_) - a1_) / a1_; }

 private:
  u64 a1_;
  int e1_;
  std::vector<std::uint8_t> col_;
};

CirculantR build_R(u64 a1, int e1);

// Outcome of checking that every cyclic run of t entries, in every row and
// column, sums to S_t or S_t + 1.
struct RunSums {
  bool ok;
  u64 S;
  u64 min_sum, max_sum;
};
RunSums consecutive_sum(const CirculantR& R, u64 t);

struct Cell {
  u32 row, col;
  bool operator==(const Cell&) const = default;
};

// f restricted to G(a_1, N_{im}): the first N_{im} points of every chain.
class ChainMap {
 public:
  ChainMap(u64 a1, int e1, u64 columns);

  const CirculantR& R() const noexcept { return R_; }
  u64 a1() const noexcept { return R_.a1(); }
  int e1() const noexcept { return R_.e1(); }
  u64 height() const noexcept { return u64{1} << R_.e1(); }
  u64 columns() const noexcept { return m_; }
  // N_{i,m}
  u64 length(u64 chain) const { return cells_[chain - 1].size(); }
  Cell at(u64 chain, u64 pos) const { return cells_[chain - 1][pos - 1]; }
  // n_{ij}: points of chain i in columns 1..j.
  u64 through(u64 chain, u64 col) const { return col == 0 ? 0 : n_[(chain - 1) * m_ + col - 1]; }
  // "col j: (chain,pos)..." one line per column, rows top to bottom.
  std::string dump() const;

 private:
  CirculantR R_;
  u64 m_;
  std::vector<std::vector<Cell>> cells_;
  std::vector<u64> n_;
};

ChainMap build_chain_map(u64 a1, int e1, u64 columns);

// The same cell computed from N_{ij} alone, without running the column loop.
Cell closed_form_cell(const CirculantR& R, u64 chain, u64 pos);

struct ColumnProfile {
  int count;          // 1 or 2
  u64 first_pos;      // chain position of the first point in the column
  u32 rows[2];        // rows in chain-position order
};
ColumnProfile f2_column_profile(const ChainMap& f, u64 chain, u64 col);

// f_2 on the grid: cell per vertex rank.
struct Embedding2D {
  GridSpec spec;
  ChainMap f;
  std::vector<Cell> image;

  Cell at(Rank v) const { return image[v]; }
};

// m >= u_2; the map is built on m columns and restricted to G.
Embedding2D build_f2(const GridSpec& spec, u64 m);
inline Embedding2D build_f2(const GridSpec& spec) { return build_f2(spec, spec.level_budget(2)); }

// Structural properties of f on G(a_1, N_{im}), exhaustively.
Report check_chain_map(const ChainMap& f);
// Properties of the restriction f_2: column containment, page prefixes and
// the edge bounds over grid edges.
Report check_f2(const Embedding2D& emb);

}  // namespace gridcube
