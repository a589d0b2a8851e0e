#include "gridcube/cubelabel.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "gridcube/parallel.hpp"
#include "maxflow.hpp"

namespace gridcube {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

int caterpillar_r(int leaf_degree) {
  if (leaf_degree < 1 || leaf_degree % 2 == 0 || !std::has_single_bit(static_cast<unsigned>(leaf_degree + 1)))
    throw std::invalid_argument("leaf degree must be 2r+1 with r+1 a power of two");
  return (leaf_degree - 1) / 2;
}

std::string caterpillar_error(const Caterpillar& cat) {
  if (cat.t < 1 || cat.t > 30) return "dimension out of range";
  const u64 N = u64{1} << cat.t;
  const u64 L = static_cast<u64>(cat.leaf_degree());
  if (cat.spine.size() < 3) return "spine shorter than 3";
  if (cat.spine.size() * (L + 1) != N) return "spine length is not 2^t/(2r+2)";
  if (cat.leaves.size() != cat.spine.size()) return "leaf lists do not match the spine";
  std::vector<std::uint8_t> seen(N, 0);
  auto mark = [&](u32 v) {
    if (v >= N || seen[v]) return false;
    seen[v] = 1;
    return true;
  };
  const size_t e = cat.spine.size();
  for (size_t i = 0; i < e; ++i) {
    const u32 s = cat.spine[i];
    if (!mark(s)) return "spine vertex repeated or out of range";
    if (hamming(s, cat.spine[(i + 1) % e]) != 1) return "spine step " + std::to_string(i) + " is not an edge";
    if (cat.leaves[i].size() != L) return "spine vertex " + std::to_string(i) + " has the wrong leaf count";
    for (u32 x : cat.leaves[i]) {
      if (!mark(x)) return "leaf repeated or out of range";
      if (hamming(s, x) != 1) return "leaf not adjacent to its spine vertex";
    }
  }
  return {};
}

namespace {

struct SpineSearch {
  int t;
  u64 N, e, L;
  std::vector<u32> path;
  std::vector<std::uint8_t> on;
  std::vector<int> free_nb;  // neighbours not on the spine
  std::vector<int> dom;      // spine vertices among self and neighbours
  u64 undominated;
  std::vector<std::vector<u32>> leaves;

  SpineSearch(int t_, u64 L_) : t(t_), N(u64{1} << t_), e(N / (L_ + 1)), L(L_), on(N, 0), free_nb(N, t_), dom(N, 0) {
    undominated = N;
  }

  void push(u32 v) {
    path.push_back(v);
    on[v] = 1;
    cover(v, +1);
    for (int b = 0; b < t; ++b) {
      const u32 w = v ^ (u32{1} << b);
      --free_nb[w];
      cover(w, +1);
    }
  }
  void pop() {
    const u32 v = path.back();
    path.pop_back();
    on[v] = 0;
    cover(v, -1);
    for (int b = 0; b < t; ++b) {
      const u32 w = v ^ (u32{1} << b);
      ++free_nb[w];
      cover(w, -1);
    }
  }
  void cover(u32 v, int d) {
    if (d > 0 && dom[v]++ == 0) --undominated;
    if (d < 0 && --dom[v] == 0) ++undominated;
  }

  // Every spine vertex keeps at least L candidate leaves.
  bool capacities_ok(u32 v) const {
    if (free_nb[v] < static_cast<int>(L)) return false;
    for (int b = 0; b < t; ++b) {
      const u32 w = v ^ (u32{1} << b);
      if (on[w] && free_nb[w] < static_cast<int>(L)) return false;
    }
    return true;
  }

  bool assign_leaves() {
    // source, spine nodes, cube vertices, sink
    const int S = 0, T = static_cast<int>(1 + e + N);
    detail::MaxFlow mf(T + 1);
    std::vector<std::vector<std::pair<u32, int>>> arcs(e);
    for (u64 i = 0; i < e; ++i) {
      mf.add_arc(S, static_cast<int>(1 + i), static_cast<std::int64_t>(L));
      for (int b = 0; b < t; ++b) {
        const u32 w = path[i] ^ (u32{1} << b);
        if (!on[w]) arcs[i].emplace_back(w, mf.add_arc(static_cast<int>(1 + i), static_cast<int>(1 + e + w), 1));
      }
    }
    for (u32 v = 0; v < N; ++v)
      if (!on[v]) mf.add_arc(static_cast<int>(1 + e + v), T, 1);
    if (static_cast<u64>(mf.run(S, T)) != N - e) return false;
    leaves.assign(e, {});
    for (u64 i = 0; i < e; ++i) {
      for (auto [w, id] : arcs[i])
        if (mf.flow(id)) leaves[i].push_back(w);
      std::sort(leaves[i].begin(), leaves[i].end());
    }
    return true;
  }

  bool extend() {
    const u64 len = path.size();
    const u32 cur = path.back();
    if (len == e) return hamming(cur, path.front()) == 1 && capacities_ok(cur) && assign_leaves();
    const u64 rem = e - len;
    if (static_cast<u64>(std::popcount(cur)) > rem + 1) return false;  // cannot close the cycle
    if (undominated > rem * static_cast<u64>(t + 1)) return false;
    for (int b = 0; b < t; ++b) {
      const u32 w = cur ^ (u32{1} << b);
      if (on[w]) continue;
      push(w);
      // The new vertex may only touch the spine through its predecessor,
      // plus the start vertex when it closes the cycle.
      if (capacities_ok(w) && extend()) return true;
      pop();
    }
    return false;
  }
};

}  // namespace

Caterpillar search_caterpillar(int t, int leaf_degree, int max_t) {
  const int r = caterpillar_r(leaf_degree);
  if (t < 1 || t > max_t) throw std::invalid_argument("dimension outside the search range");
  const u64 N = u64{1} << t;
  const u64 L = static_cast<u64>(leaf_degree);
  if (N % (L + 1) != 0 || N / (L + 1) < 3) throw std::invalid_argument("no spine of length >= 3 fits");
  if (L + 2 > static_cast<u64>(t)) throw std::invalid_argument("leaf degree too large for the dimension");
  SpineSearch s(t, L);
  s.push(0);
  s.push(1);
  if (!s.extend())
    throw SearchExhausted("no caterpillar Cat(" + std::to_string(s.e) + "," + std::to_string(leaf_degree) +
                          ") in Q_" + std::to_string(t));
  Caterpillar cat{t, r, s.path, s.leaves};
  if (auto err = caterpillar_error(cat); !err.empty()) throw std::logic_error("search result invalid: " + err);
  return cat;
}

Caterpillar double_caterpillar(const Caterpillar& cat) {
  Caterpillar out;
  out.t = cat.t + 1;
  out.r = cat.r;
  const u32 bit = u32{1} << cat.t;
  out.spine = cat.spine;
  out.leaves = cat.leaves;
  for (size_t i = cat.spine.size(); i-- > 0;) {
    out.spine.push_back(cat.spine[i] | bit);
    std::vector<u32> l = cat.leaves[i];
    for (auto& x : l) x |= bit;
    out.leaves.push_back(std::move(l));
  }
  return out;
}

int base_dimension(int r) {
  switch (r) {
    case 0: return 3;
    case 1: return 6;
    default: throw std::invalid_argument("no searchable base caterpillar for r = " + std::to_string(r));
  }
}

Caterpillar caterpillar_for(int t, int r) {
  static std::mutex mu;
  static std::map<int, Caterpillar> bases;
  const int b = base_dimension(r);
  if (t < b) throw std::invalid_argument("Q_" + std::to_string(t) + " is below the base dimension for r = " + std::to_string(r));
  Caterpillar cat;
  {
    std::lock_guard lock(mu);
    auto it = bases.find(r);
    if (it == bases.end()) it = bases.emplace(r, search_caterpillar(b, 2 * r + 1)).first;
    cat = it->second;
  }
  while (cat.t < t) cat = double_caterpillar(cat);
  return cat;
}

CubeLabeling label_from_caterpillar(const Caterpillar& cat) {
  if (auto err = caterpillar_error(cat); !err.empty()) throw std::invalid_argument(err);
  CubeLabeling lab;
  lab.t = cat.t;
  lab.window = cat.window();
  const u64 N = u64{1} << cat.t;
  const u32 block = static_cast<u32>(2 * cat.r + 2);
  lab.label.assign(N, 0);
  lab.vertex.assign(N, 0);
  for (size_t i = 1; i <= cat.spine.size(); ++i) {
    lab.label[cat.spine[i - 1]] = block * static_cast<u32>(i);
    for (size_t j = 1; j <= cat.leaves[i - 1].size(); ++j)
      lab.label[cat.leaves[i - 1][j - 1]] = block * static_cast<u32>(i - 1) + static_cast<u32>(j);
  }
  for (u32 x = 0; x < N; ++x) lab.vertex[lab.label[x] - 1] = x;
  return lab;
}

CubeLabeling gray_label(int t) {
  if (t < 1 || t > 30) throw std::invalid_argument("dimension out of range");
  CubeLabeling lab;
  lab.t = t;
  lab.window = 0;
  const u64 N = u64{1} << t;
  lab.label.resize(N);
  lab.vertex.resize(N);
  for (u32 i = 0; i < N; ++i) {
    const u32 g = i ^ (i >> 1);
    lab.vertex[i] = g;
    lab.label[g] = i + 1;
  }
  return lab;
}

CubeLabeling labeling_for(int t, int window) {
  if (window == 0) return gray_label(t);
  if (window < 3 || window % 2 == 0) throw std::invalid_argument("window must be 0 or 2r+3");
  return label_from_caterpillar(caterpillar_for(t, (window - 3) / 2));
}

namespace {

template <class Bad>
std::optional<WindowViolation> scan(const CubeLabeling& lab, int w, unsigned threads, Bad bad) {
  const u64 N = lab.size();
  std::vector<std::optional<WindowViolation>> found(threads ? threads : default_threads());
  parallel_for(N, static_cast<unsigned>(found.size()), [&](u64 b, u64 e, unsigned worker) {
    for (u64 l = b; l < e; ++l)
      for (int d = 1; d <= w && static_cast<u64>(d) < N; ++d) {
        const u64 l2 = (l + static_cast<u64>(d)) % N;
        const int dist = hamming(lab.vertex[l], lab.vertex[l2]);
        if (bad(d, dist)) {
          found[worker] = WindowViolation{l + 1, l2 + 1, dist};
          return;
        }
      }
  });
  std::optional<WindowViolation> first;
  for (auto& f : found)
    if (f && (!first || f->label1 < first->label1)) first = f;
  return first;
}

}  // namespace

std::optional<WindowViolation> verify_window(const CubeLabeling& lab, int w, int dbound, unsigned threads) {
  return scan(lab, w, threads, [dbound](int, int dist) { return dist > dbound; });
}

std::optional<WindowViolation> verify_gray_bound(const CubeLabeling& lab, int w, unsigned threads) {
  return scan(lab, w, threads, [](int d, int dist) { return dist > d; });
}

namespace {

std::string bits(u32 x, int t) {
  std::string s(static_cast<size_t>(t), '0');
  for (int b = 0; b < t; ++b)
    if (x >> b & 1) s[static_cast<size_t>(t - 1 - b)] = '1';
  return s;
}

u32 parse_bits(const std::string& s, int t) {
  if (static_cast<int>(s.size()) != t || s.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("bad vertex string '" + s + "'");
  return static_cast<u32>(std::stoul(s, nullptr, 2));
}

}  // namespace

void write_caterpillar(std::ostream& out, const Caterpillar& cat) {
  out << "CAT " << cat.t << ' ' << cat.r << ' ' << cat.e() << '\n';
  for (u32 s : cat.spine) out << bits(s, cat.t) << '\n';
  for (const auto& l : cat.leaves) {
    for (size_t j = 0; j < l.size(); ++j) out << (j ? " " : "") << bits(l[j], cat.t);
    out << '\n';
  }
}

Caterpillar read_caterpillar(std::istream& in) {
  std::string tag;
  Caterpillar cat;
  u64 e = 0;
  if (!(in >> tag >> cat.t >> cat.r >> e) || tag != "CAT") throw std::invalid_argument("missing CAT header");
  if (cat.t < 1 || cat.t > 30 || cat.r < 0 || e < 3 || e > (u64{1} << cat.t))
    throw std::invalid_argument("CAT header out of range");
  std::string w;
  for (u64 i = 0; i < e; ++i) {
    if (!(in >> w)) throw std::invalid_argument("truncated spine");
    cat.spine.push_back(parse_bits(w, cat.t));
  }
  cat.leaves.resize(e);
  for (u64 i = 0; i < e; ++i)
    for (int j = 0; j < cat.leaf_degree(); ++j) {
      if (!(in >> w)) throw std::invalid_argument("truncated leaf lists");
      cat.leaves[i].push_back(parse_bits(w, cat.t));
    }
  if (auto err = caterpillar_error(cat); !err.empty()) throw std::invalid_argument("invalid caterpillar: " + err);
  return cat;
}

}  // namespace gridcube
