#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gridcube/verify.hpp"

namespace gridcube {

std::string label_string(u64 label, int n) {
  std::string s(static_cast<size_t>(n), '0');
  for (int b = 0; b < n; ++b)
    if (label >> b & 1) s[static_cast<size_t>(n - 1 - b)] = '1';
  return s;
}

void write_embedding(std::ostream& out, const HypercubeEmbedding& emb) {
  const GridSpec& spec = emb.spec;
  out << "GRIDCUBE 1\ndims";
  for (u64 a : spec.dims()) out << ' ' << a;
  out << '\n' << emb.n;
  for (int j = 1; j <= spec.k(); ++j) out << ' ' << spec.e(j);
  out << "\nlabelings";
  for (int w : emb.windows()) out << ' ' << w;
  out << '\n';
  for (Rank v = 0; v < spec.total(); ++v) {
    const auto x = unrank(spec, v);
    for (u32 c : x.coords) out << c + 1 << ' ';
    out << label_string(emb.label[v], emb.n) << '\n';
  }
}

namespace {

std::istringstream line_of(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(std::string("missing ") + what + " line");
  return std::istringstream(line);
}

}  // namespace

HypercubeEmbedding read_embedding(std::istream& in, u64 cap) {
  std::string word;
  int version = 0;
  if (auto s = line_of(in, "header"); !(s >> word >> version) || word != "GRIDCUBE" || version != 1)
    throw std::invalid_argument("not a GRIDCUBE 1 file");
  std::vector<u64> dims;
  {
    auto s = line_of(in, "dims");
    if (!(s >> word) || word != "dims") throw std::invalid_argument("expected dims line");
    for (u64 a; s >> a;) dims.push_back(a);
  }
  GridSpec spec(dims, cap);
  {
    // "n e_1 ... e_k"; a literal leading "n" is also accepted.
    auto s = line_of(in, "exponent");
    std::vector<std::string> tok;
    for (std::string t; s >> t;) tok.push_back(t);
    if (!tok.empty() && tok.front() == "n") tok.erase(tok.begin());
    std::vector<int> got;
    for (const auto& t : tok) got.push_back(std::stoi(t));
    std::vector<int> want{spec.cube_dim()};
    for (int j = 1; j <= spec.k(); ++j) want.push_back(spec.e(j));
    if (got != want) throw std::invalid_argument("exponent line does not match the dims");
  }
  std::vector<int> windows;
  {
    auto s = line_of(in, "labelings");
    if (!(s >> word) || word != "labelings") throw std::invalid_argument("expected labelings line");
    for (int w; s >> w;) windows.push_back(w);
    if (static_cast<int>(windows.size()) != spec.k()) throw std::invalid_argument("one window per dimension");
  }
  HypercubeEmbedding emb{spec, spec.cube_dim(), {}, {}};
  for (int j = 1; j <= spec.k(); ++j)
    emb.labelings.push_back(std::make_shared<const CubeLabeling>(labeling_for(spec.width(j), windows[static_cast<size_t>(j - 1)])));
  emb.label.assign(spec.total(), 0);
  std::vector<bool> seen(spec.total(), false);
  std::vector<u64> xs(static_cast<size_t>(spec.k()));
  std::string bits;
  for (u64 row = 0; row < spec.total(); ++row) {
    auto s = line_of(in, "vertex");
    for (auto& x : xs)
      if (!(s >> x)) throw std::invalid_argument("short vertex line " + std::to_string(row + 1));
    if (!(s >> bits) || static_cast<int>(bits.size()) != emb.n || bits.find_first_not_of("01") != std::string::npos)
      throw std::invalid_argument("bad label on vertex line " + std::to_string(row + 1));
    for (int j = 1; j <= spec.k(); ++j)
      if (xs[static_cast<size_t>(j - 1)] < 1 || xs[static_cast<size_t>(j - 1)] > spec.a(j))
        throw std::invalid_argument("coordinate out of range on vertex line " + std::to_string(row + 1));
    const Rank v = rank_of(spec, GridVertex::from_one_based(xs));
    if (seen[v]) throw std::invalid_argument("vertex listed twice");
    seen[v] = true;
    emb.label[v] = std::stoull(bits, nullptr, 2);
  }
  return emb;
}

Report audit_file(std::istream& in, u64 cap, unsigned threads) {
  const auto emb = read_embedding(in, cap);
  Report rep;
  rep.reported("grid.dims", emb.spec.to_string());
  // Decoded coordinates must lie in the labeling domains and below u_k.
  const auto fk = decode_fk(emb);
  bool top = true;
  for (Rank v = 0; v < emb.spec.total(); ++v) top = top && fk(v, emb.spec.k()) <= fk.levels;
  rep.pass_fail("file.top_level", top);
  rep.append(audit_embedding(emb, 8, threads));
  // Unseeded rebuild for comparison; a seeded file may legitimately differ.
  const Pipeline p(emb.spec);
  const auto again = assemble_Hk(emb.spec, p.fk(), emb.windows());
  rep.reported("file.matches_library", again.label == emb.label ? "yes" : "no");
  return rep;
}

}  // namespace gridcube
