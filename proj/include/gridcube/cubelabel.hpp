#pragma once

// Spanning cyclic regular caterpillars of Q_t and the labelings they induce.
//
// Hypercube vertices are integers 0..2^t-1. Labels are 1..2^t and label
// differences are cyclic mod 2^t.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridcube {

// Raised when an exhaustive search finishes without a caterpillar.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cat(e, 2r+1) in Q_t: a spine cycle of e = 2^t/(2r+2) vertices, each
// carrying exactly 2r+1 leaves.
struct Caterpillar {
  int t = 0;
  int r = 0;
  std::vector<std::uint32_t> spine;
  std::vector<std::vector<std::uint32_t>> leaves;  // ascending per spine vertex

  int leaf_degree() const noexcept { return 2 * r + 1; }
  std::uint64_t e() const noexcept { return spine.size(); }
  int window() const noexcept { return 2 * r + 3; }
};

// Empty when every invariant holds, otherwise the first broken one.
std::string caterpillar_error(const Caterpillar& cat);

// r from a leaf degree 2r+1 with r+1 a power of two; throws
// invalid_argument for anything else.
int caterpillar_r(int leaf_degree);

// Deterministic backtracking search. Throws invalid_argument on infeasible
// parameters and SearchExhausted when no caterpillar exists.
Caterpillar search_caterpillar(int t, int leaf_degree, int max_t = 8);

// Copy 0 spine forward, copy 1 spine backward, joined across bit t.
Caterpillar double_caterpillar(const Caterpillar& cat);

// The smallest searched caterpillar with this r, doubled up to dimension t.
// Base caterpillars are searched once per process.
Caterpillar caterpillar_for(int t, int r);
// Smallest dimension with a base caterpillar for r (3 for r=0, 6 for r=1).
int base_dimension(int r);

struct CubeLabeling {
  int t = 0;
  int window = 0;                    // 0 for the Gray labeling
  std::vector<std::uint32_t> label;  // vertex -> 1..2^t
  std::vector<std::uint32_t> vertex; // label-1 -> vertex

  std::uint64_t size() const noexcept { return label.size(); }
  // L^{-1}(l), l in 1..2^t.
  std::uint32_t decode(std::uint64_t l) const { return vertex[l - 1]; }
  std::uint32_t encode(std::uint32_t x) const { return label[x]; }
};

CubeLabeling label_from_caterpillar(const Caterpillar& cat);
CubeLabeling gray_label(int t);
// Window 0 gives Gray, otherwise the caterpillar labeling with 2r+3 = window.
CubeLabeling labeling_for(int t, int window);

struct WindowViolation {
  std::uint64_t label1, label2;  // label2 follows label1 cyclically
  int distance;
};

// Every pair at cyclic label distance 1..w has Hamming distance <= dbound.
std::optional<WindowViolation> verify_window(const CubeLabeling& lab, int w, int dbound,
                                             unsigned threads = 0);
// Every pair at cyclic label distance d <= w has Hamming distance <= d.
std::optional<WindowViolation> verify_gray_bound(const CubeLabeling& lab, int w,
                                                 unsigned threads = 0);

// "CAT t r e", the spine one binary string per line, then one line of
// leaves per spine vertex.
void write_caterpillar(std::ostream& out, const Caterpillar& cat);
Caterpillar read_caterpillar(std::istream& in);

// Number of set bits in x ^ y.
inline int hamming(std::uint64_t x, std::uint64_t y) { return __builtin_popcountll(x ^ y); }

}  // namespace gridcube
