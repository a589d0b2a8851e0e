#pragma once

// H^k: per-dimension labelings applied to f_k, plus edge scans, the
// invariant battery and a tiny exact oracle.
//
// A label is an n-bit integer. Block j (width e_j - e_{j-1}) sits at bits
// [n - e_j, n - e_{j-1}), so block 1 is the most significant and reads first
// when the label is printed as a binary string.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gridcube/cubelabel.hpp"
#include "gridcube/grid.hpp"
#include "gridcube/pipeline.hpp"
#include "gridcube/report.hpp"

namespace gridcube {

struct HypercubeEmbedding {
  GridSpec spec;
  int n = 0;
  std::vector<u64> label;  // per vertex rank
  std::vector<std::shared_ptr<const CubeLabeling>> labelings;

  std::vector<int> windows() const;
  u64 block(Rank v, int j) const {
    return (label[v] >> (n - spec.e(j))) & ((u64{1} << spec.width(j)) - 1);
  }
  // f_k(v)_j recovered through the labeling of block j.
  u32 coordinate(Rank v, int j) const {
    return labelings[static_cast<size_t>(j - 1)]->encode(static_cast<u32>(block(v, j)));
  }
};

// Gray below block width 6, the r = 1 caterpillar labeling (window 5) from 6 up.
std::vector<int> default_windows(const GridSpec& spec);

HypercubeEmbedding assemble_Hk(const GridSpec& spec, const StageEmbedding& fk,
                               std::vector<std::shared_ptr<const CubeLabeling>> labelings);
HypercubeEmbedding assemble_Hk(const GridSpec& spec, const StageEmbedding& fk, const std::vector<int>& windows);

// f_k read back from the labels.
StageEmbedding decode_fk(const HypercubeEmbedding& emb);

// Per-dimension maxima of coordinate differences over grid edges, and the
// table L(j, i0) where i0 is the dimension the edge runs along. Differences
// are cyclic mod 2^{e_j - e_{j-1}} unless cyclic is false.
struct CoordinateDiffs {
  std::vector<u64> max_diff;            // index j-1
  std::vector<std::vector<u64>> table;  // [j-1][i0-1]
};
CoordinateDiffs coordinate_diffs(const GridSpec& spec, const StageEmbedding& fk, bool cyclic = true,
                                 unsigned threads = 0);

// The intermediate bound for L(j, i0) from the dilation argument.
u64 case_bound(int j, int i0);

struct DilationReport {
  int k = 0;
  u64 edges = 0;
  int dilation = 0;
  std::vector<u64> histogram;  // edges per Hamming distance
  CoordinateDiffs diffs;
  // Bound implied by the labelings: per dimension min(3, t_j) when the
  // difference is within a caterpillar window, min(diff, t_j) under Gray,
  // t_j otherwise; summed over dimensions and maximized over edges.
  int implied_bound = 0;
  u64 unsound = 0;  // (edge, dimension) pairs whose block distance beats the implied term
  bool all_caterpillar = false;
  bool all_within_window = false;
};
DilationReport dilation(const HypercubeEmbedding& emb, unsigned threads = 0);

// Exact decision of B(G, Q_n) <= d by branch and bound. |G| <= 12, n <= 4.
bool brute_force_dilation(const GridSpec& spec, int n, int d);
// Smallest feasible d.
int brute_force_bandwidth(const GridSpec& spec, int n);

struct AuditOptions {
  std::map<int, BinaryMatrix> seeds;
  std::vector<int> windows;  // empty: default_windows
  unsigned threads = 0;
  u64 min_side = 5;   // threshold for the pipeline battery
  u64 diff_side = 8;  // threshold for the coordinate-difference bounds
};

// Every check on the built artifacts. The report's ok() is the exit status.
Report audit(const GridSpec& spec, const AuditOptions& opt = {});
// Checks on an embedding that is already built (or read from a file).
Report audit_embedding(const HypercubeEmbedding& emb, u64 diff_side = 8, unsigned threads = 0);

// GRIDCUBE file format.
void write_embedding(std::ostream& out, const HypercubeEmbedding& emb);
HypercubeEmbedding read_embedding(std::istream& in, u64 cap = kDefaultVertexCap);
// Parses, audits, and reports whether the library rebuilds the same labels.
Report audit_file(std::istream& in, u64 cap = kDefaultVertexCap, unsigned threads = 0);

std::string label_string(u64 label, int n);

}  // namespace gridcube
