#pragma once

// Grid and hypercube index arithmetic.
//
// Grid vertices are identified by their rank: x_1 varies fastest and x_k is
// the most significant coordinate, so rank order refines every page order.
// Coordinates inside a GridVertex are 0-based; everything printed or parsed
// at an API boundary is 1-based.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridcube {

using u64 = std::uint64_t;
using u32 = std::uint32_t;
using Rank = std::uint64_t;

inline constexpr u64 kDefaultVertexCap = u64{1} << 26;

// Thrown when a grid exceeds the configured vertex cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Exponents e_0..e_k with e_i = ceil(log2(a_1...a_i)), by integer bit length.
std::vector<int> compute_exponents(std::span<const u64> dims);

// ceil(log2(x)) for x >= 1.
int ceil_log2(u64 x);

class GridSpec {
 public:
  explicit GridSpec(std::vector<u64> dims, u64 cap = kDefaultVertexCap);

  int k() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<u64>& dims() const noexcept { return dims_; }
  u64 a(int i) const { return dims_.at(static_cast<size_t>(i - 1)); }
  u64 total() const noexcept { return prefix_.back(); }

  // e_i, 0 <= i <= k.
  int e(int i) const { return exps_.at(static_cast<size_t>(i)); }
  // e_i - e_{i-1}, the width of the i-th hypercube block.
  int width(int i) const { return e(i) - e(i - 1); }
  // a_1...a_i; prefix(0) == 1.
  u64 prefix(int i) const { return prefix_.at(static_cast<size_t>(i)); }
  // P_i = a_{i+1}...a_k; pages(k) == 1.
  u64 pages(int i) const { return total() / prefix(i); }
  // u_i = ceil(|G| / 2^{e_{i-1}}), 1 <= i <= k.
  u64 level_budget(int i) const;
  // Number of hypercube bits, e_k.
  int cube_dim() const noexcept { return exps_.back(); }

  std::string to_string() const;

 private:
  std::vector<u64> dims_;
  std::vector<int> exps_;
  std::vector<u64> prefix_;
};

struct GridVertex {
  std::vector<u32> coords;  // 0-based

  static GridVertex from_one_based(std::span<const u64> xs);
};

Rank rank_of(const GridSpec& spec, const GridVertex& v);
GridVertex unrank(const GridSpec& spec, Rank r);
// 0-based value of coordinate i (1-based index) of the vertex with rank r.
inline u32 coord_of(const GridSpec& spec, Rank r, int i) {
  return static_cast<u32>((r / spec.prefix(i - 1)) % spec.a(i));
}

// Position on the infinite two-row-indexed grid G(a_1); both 1-based.
struct ChainPoint {
  u64 chain;
  u64 position;
  bool operator==(const ChainPoint&) const = default;
};

ChainPoint kappa(const GridSpec& spec, const GridVertex& v);
inline ChainPoint kappa(const GridSpec& spec, Rank r) {
  return {r % spec.a(1) + 1, r / spec.a(1) + 1};
}

// 1-based index r with v in D_i^r, 2 <= i <= k-1.
u64 page_index(const GridSpec& spec, const GridVertex& v, int i);
// Same for any 0 <= i <= k, without range validation.
inline u64 page_of(const GridSpec& spec, Rank r, int i) { return r / spec.prefix(i) + 1; }

// u_i, 2 <= i <= k.
u64 level_budget(const GridSpec& spec, int i);

// The (i-1)-level Y_i^c together with its section decomposition.
class LevelAddress {
 public:
  LevelAddress(const GridSpec& spec, int stage, u64 level);
  int stage() const noexcept { return stage_; }
  u64 level() const noexcept { return level_; }
  u64 section() const noexcept { return (level_ - 1) / section_size_ + 1; }
  u64 offset() const noexcept { return (level_ - 1) % section_size_ + 1; }

 private:
  int stage_;
  u64 level_;
  u64 section_size_;
};

}  // namespace gridcube
