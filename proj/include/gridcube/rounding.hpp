#pragma once

// Consistent roundings of sequences and matrices, the constant-row matrix
// F^X, and zero-position queries N_r(d).
//
// Rows, columns and ordinals are 1-based in every public signature except
// the raw (row, col) accessors of BinaryMatrix / RationalMatrix, which are
// 0-based like any container.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gridcube/rational.hpp"

namespace gridcube {

using RealSequence = std::vector<Rational>;

class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t m, std::size_t n);
  static BinaryMatrix from_rows(std::span<const std::string> rows);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  bool at(std::size_t r, std::size_t c) const { return bits_[r * n_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v);
  // Cached population count of row r (0-based).
  std::int64_t row_count(std::size_t r) const { return counts_[r]; }
  std::int64_t total() const;
  bool operator==(const BinaryMatrix&) const = default;

 private:
  std::size_t m_ = 0, n_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::int64_t> counts_;
};

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t m, std::size_t n) : m_(m), n_(n), v_(m * n) {}
  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  const Rational& at(std::size_t r, std::size_t c) const { return v_[r * n_ + c]; }
  Rational& at(std::size_t r, std::size_t c) { return v_[r * n_ + c]; }

 private:
  std::size_t m_ = 0, n_ = 0;
  std::vector<Rational> v_;
};

// X = (s_1..s_m) with every s_i in {kappa, kappa+1}, and the column count n.
struct RoundingSpec {
  std::vector<std::int64_t> X;
  std::int64_t n = 0;

  std::int64_t kappa() const;
  // c = (kappa+1)/n
  Rational density() const { return Rational(kappa() + 1, n); }
  // T^X: row i constant at s_i/n.
  RationalMatrix source() const;
};

// Rounds every value to floor or ceil so that prefix sums in the original
// order and in the order given by `order` stay within floor/ceil of the exact
// prefix sums. order[t] is the 0-based index of the t-th element in the
// second order.
std::vector<std::int64_t> two_way_round(std::span<const Rational> seq,
                                        std::span<const std::size_t> order);

// Rounding with every initial row and column sum, and the grand total, off by
// less than one. Entries must lie in [0,1].
BinaryMatrix round_matrix(const RationalMatrix& T);

BinaryMatrix build_FX(const RoundingSpec& spec);

// Zero positions with row-major cyclic wraparound.
class ZeroIndex {
 public:
  explicit ZeroIndex(const BinaryMatrix& F);
  // N_r(d): column (1..n) of the d-th zero counted from the start of row r.
  // d past the end of row r continues into later rows, d <= 0 into earlier
  // ones.
  std::int64_t column(std::size_t r, std::int64_t d) const;
  // Same zero, as a signed offset from the start of row r: column plus n for
  // every row boundary crossed.
  std::int64_t offset(std::size_t r, std::int64_t d) const;
  std::int64_t zeros_in_row(std::size_t r) const { return base_[r] - base_[r - 1]; }

 private:
  std::int64_t linear(std::size_t r, std::int64_t d) const;
  std::size_t m_, n_;
  std::vector<std::int64_t> pos_;   // linear positions of zeros, row-major
  std::vector<std::int64_t> base_;  // zeros before row r (base_[0] = 0)
};

std::int64_t zero_index(const BinaryMatrix& F, std::size_t r, std::int64_t d);

enum class Direction { Forward, Backward };
Direction check_forward(const BinaryMatrix& F, const RationalMatrix& T, std::size_t r,
                        std::size_t h);

// Discrepancy contracts for a rounding F of T.
struct RoundingCheck {
  bool rows = true;     // every initial row sum off by < 1
  bool columns = true;  // every initial column sum off by < 1
  bool total = true;    // grand total off by < 1
  bool ok() const { return rows && columns && total; }
};
RoundingCheck check_rounding(const RationalMatrix& T, const BinaryMatrix& F);

// Balance contracts of a designation matrix with prescribed row sums.
struct BalanceCheck {
  bool row_sums = true;
  std::int64_t column_spread = 0;  // worst spread of equal-depth initial column sums
  std::int64_t row_spread = 0;     // worst spread of equal-width initial row sums
  bool ok() const { return row_sums && column_spread <= 1 && row_spread <= 2; }
};
BalanceCheck check_balance(const BinaryMatrix& F, std::span<const std::int64_t> row_sums);

// Zero-gap bounds for F^X with kappa+1 <= n/2. Windows run up to max_e
// (default n) and wrap cyclically across rows.
struct ZeroGapCheck {
  std::int64_t forward_window = 0;    // forward entry followed by >e ones in 2e
  std::int64_t forward_gap = 0;       // forward zero with N(d+e)-N(d) > 2e
  std::int64_t backward_gap = 0;      // backward zero with N(d+e)-N(d) > 2e+2
  std::int64_t cross_gap = 0;         // N_r(d+e)-N_s(d) > 2e+4
  std::int64_t backward_entries = 0;  // how many backward zeros were seen
  bool ok() const { return forward_window + forward_gap + backward_gap + cross_gap == 0; }
};
ZeroGapCheck check_zero_gaps(const BinaryMatrix& F, const RationalMatrix& T, std::int64_t max_e = -1);

// "m n" header then one line of 0/1 characters per row.
std::string dump_matrix(const BinaryMatrix& F);
// Reads matrices in dump format. A line "STAGE i" before a matrix tags it;
// untagged matrices get consecutive stages starting after the previous one
// (the first defaults to 2). Blank lines and '#' comments are skipped.
struct TaggedMatrix {
  int stage;
  BinaryMatrix F;
};
std::vector<TaggedMatrix> parse_matrices(std::istream& in);

}  // namespace gridcube
