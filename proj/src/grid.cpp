#include "gridcube/grid.hpp"

#include <bit>
#include <sstream>

namespace gridcube {

int ceil_log2(u64 x) {
  if (x == 0) throw std::invalid_argument("ceil_log2 of zero");
  return static_cast<int>(std::bit_width(x - 1));
}

std::vector<int> compute_exponents(std::span<const u64> dims) {
  if (dims.empty()) throw std::invalid_argument("empty dimension list");
  std::vector<int> out{0};
  unsigned __int128 prod = 1;
  for (u64 a : dims) {
    if (a < 2) throw std::invalid_argument("side lengths must be at least 2");
    prod *= a;
    if (prod > (static_cast<unsigned __int128>(1) << 63))
      throw SizeError("grid product exceeds 2^63");
    out.push_back(ceil_log2(static_cast<u64>(prod)));
  }
  return out;
}

GridSpec::GridSpec(std::vector<u64> dims, u64 cap) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw std::invalid_argument("grid needs at least two dimensions");
  exps_ = compute_exponents(dims_);
  prefix_.push_back(1);
  for (u64 a : dims_) prefix_.push_back(prefix_.back() * a);
  if (total() > cap)
    throw SizeError("grid has " + std::to_string(total()) + " vertices, cap is " +
                    std::to_string(cap));
}

u64 GridSpec::level_budget(int i) const {
  if (i < 1 || i > k()) throw std::invalid_argument("level budget stage out of range");
  u64 d = u64{1} << e(i - 1);
  return (total() + d - 1) / d;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < dims_.size(); ++i) os << (i ? "x" : "") << dims_[i];
  os << ']';
  return os.str();
}

GridVertex GridVertex::from_one_based(std::span<const u64> xs) {
  GridVertex v;
  for (u64 x : xs) {
    if (x < 1) throw std::invalid_argument("coordinates are 1-based");
    v.coords.push_back(static_cast<u32>(x - 1));
  }
  return v;
}

static void check_vertex(const GridSpec& spec, const GridVertex& v) {
  if (v.coords.size() != static_cast<size_t>(spec.k()))
    throw std::invalid_argument("vertex arity does not match grid");
  for (int i = 1; i <= spec.k(); ++i)
    if (v.coords[i - 1] >= spec.a(i)) throw std::invalid_argument("coordinate out of range");
}

Rank rank_of(const GridSpec& spec, const GridVertex& v) {
  check_vertex(spec, v);
  Rank r = 0;
  for (int i = spec.k(); i >= 1; --i) r = r * spec.a(i) + v.coords[i - 1];
  return r;
}

GridVertex unrank(const GridSpec& spec, Rank r) {
  if (r >= spec.total()) throw std::invalid_argument("rank out of range");
  GridVertex v;
  for (int i = 1; i <= spec.k(); ++i) {
    v.coords.push_back(static_cast<u32>(r % spec.a(i)));
    r /= spec.a(i);
  }
  return v;
}

ChainPoint kappa(const GridSpec& spec, const GridVertex& v) {
  return kappa(spec, rank_of(spec, v));
}

u64 page_index(const GridSpec& spec, const GridVertex& v, int i) {
  if (i < 2 || i > spec.k() - 1) throw std::invalid_argument("page stage out of range");
  return page_of(spec, rank_of(spec, v), i);
}

u64 level_budget(const GridSpec& spec, int i) {
  if (i < 2 || i > spec.k()) throw std::invalid_argument("level budget stage out of range");
  return spec.level_budget(i);
}

LevelAddress::LevelAddress(const GridSpec& spec, int stage, u64 level)
    : stage_(stage), level_(level) {
  if (stage < 2 || stage > spec.k()) throw std::invalid_argument("stage out of range");
  if (level < 1) throw std::invalid_argument("levels are 1-based");
  section_size_ = u64{1} << spec.width(stage);
}

}  // namespace gridcube
