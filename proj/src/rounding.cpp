#include "gridcube/rounding.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "maxflow.hpp"

namespace gridcube {

BinaryMatrix::BinaryMatrix(std::size_t m, std::size_t n)
    : m_(m), n_(n), bits_(m * n, 0), counts_(m, 0) {}

BinaryMatrix BinaryMatrix::from_rows(std::span<const std::string> rows) {
  if (rows.empty()) return {};
  BinaryMatrix F(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != F.n_) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < F.n_; ++c) {
      char ch = rows[r][c];
      if (ch != '0' && ch != '1') throw std::invalid_argument("matrix entries must be 0 or 1");
      F.set(r, c, ch == '1');
    }
  }
  return F;
}

void BinaryMatrix::set(std::size_t r, std::size_t c, bool v) {
  auto& b = bits_[r * n_ + c];
  counts_[r] += static_cast<std::int64_t>(v) - b;
  b = v;
}

std::int64_t BinaryMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t RoundingSpec::kappa() const {
  if (X.empty()) throw std::invalid_argument("empty row-sum sequence");
  auto [lo, hi] = std::minmax_element(X.begin(), X.end());
  if (*lo < 0 || *hi - *lo > 1) throw std::invalid_argument("row sums must take two adjacent values");
  // A constant sequence is read as all-kappa.
  return *lo;
}

RationalMatrix RoundingSpec::source() const {
  RationalMatrix T(X.size(), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) T.at(i, j) = Rational(X[i], n);
  return T;
}

namespace {

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
  if (l > (std::int64_t{1} << 56)) throw std::overflow_error("common denominator too large");
  return static_cast<std::int64_t>(l);
}

// Unit blocks (jD, (j+1)D) crossed by each element when laid out in `order`.
// Calls visit(block, element) in layout order.
template <class Visit>
void for_each_block(std::span<const std::int64_t> w, std::span<const std::size_t> order,
                    std::int64_t D, Visit&& visit) {
  std::int64_t P = 0;
  for (std::size_t idx : order) {
    std::int64_t x = w[idx];
    if (x > 0) {
      std::int64_t first = P / D, last = (P + x + D - 1) / D - 1;
      for (std::int64_t j = first; j <= last; ++j) visit(j, idx);
    }
    P += x;
  }
}

}  // namespace

std::vector<std::int64_t> two_way_round(std::span<const Rational> seq,
                                        std::span<const std::size_t> order) {
  const std::size_t n = seq.size();
  if (order.size() != n) throw std::invalid_argument("order length mismatch");
  {
    std::vector<char> seen(n, 0);
    for (std::size_t i : order) {
      if (i >= n || seen[i]) throw std::invalid_argument("order is not a permutation");
      seen[i] = 1;
    }
  }
  std::vector<std::int64_t> out(n);
  std::int64_t D = 1;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = seq[i].floor();
    D = checked_lcm(D, seq[i].den());
  }
  // Fractional parts scaled to the common denominator, plus one padding
  // element (last in both orders) that makes the total integral.
  std::vector<std::int64_t> w(n + 1);
  std::int64_t W = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational f = seq[i] - Rational(out[i]);
    w[i] = f.num() * (D / f.den());
    W += w[i];
  }
  w[n] = (D - W % D) % D;
  const std::int64_t M = (W + w[n]) / D;
  if (M == 0) return out;

  std::vector<std::size_t> first(n + 1), second(n + 1);
  std::iota(first.begin(), first.end(), 0);
  std::copy(order.begin(), order.end(), second.begin());
  second[n] = n;

  const int S = 0, T = 1, A0 = 2, B0 = A0 + static_cast<int>(M);
  const int E0 = B0 + static_cast<int>(M);
  auto in = [&](std::size_t i) { return E0 + 2 * static_cast<int>(i); };
  detail::MaxFlow g(E0 + 2 * static_cast<int>(n + 1));
  for (int j = 0; j < M; ++j) g.add_arc(S, A0 + j, 1);
  for_each_block(w, first, D, [&](std::int64_t j, std::size_t i) {
    g.add_arc(A0 + static_cast<int>(j), in(i), 1);
  });
  std::vector<int> through(n + 1);
  for (std::size_t i = 0; i <= n; ++i) through[i] = g.add_arc(in(i), in(i) + 1, 1);
  for_each_block(w, second, D, [&](std::int64_t j, std::size_t i) {
    g.add_arc(in(i) + 1, B0 + static_cast<int>(j), 1);
  });
  for (int j = 0; j < M; ++j) g.add_arc(B0 + j, T, 1);

  if (g.run(S, T) != M) throw std::logic_error("two-way rounding flow is infeasible");
  for (std::size_t i = 0; i < n; ++i) out[i] += g.flow(through[i]);
  return out;
}

BinaryMatrix round_matrix(const RationalMatrix& T) {
  const std::size_t m = T.rows(), n = T.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (T.at(i, j) < Rational(0) || T.at(i, j) > Rational(1))
        throw std::invalid_argument("matrix entries must lie in [0,1]");
  if (m == 0 || n == 0) return BinaryMatrix(m, n);

  // Extend by an integrality column and row; the corner holds the grand total.
  const std::size_t M = m + 1, N = n + 1;
  std::vector<Rational> y(M * N);
  std::vector<Rational> col(n);
  Rational total;
  for (std::size_t i = 0; i < m; ++i) {
    Rational row;
    for (std::size_t j = 0; j < n; ++j) {
      y[i * N + j] = T.at(i, j);
      row += T.at(i, j);
      col[j] += T.at(i, j);
    }
    y[i * N + n] = Rational(row.ceil()) - row;
    total += row;
  }
  for (std::size_t j = 0; j < n; ++j) y[m * N + j] = Rational(col[j].ceil()) - col[j];
  y[m * N + n] = total;

  std::vector<std::size_t> column_major;
  column_major.reserve(M * N);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t i = 0; i < M; ++i) column_major.push_back(i * N + j);
  auto r = two_way_round(y, column_major);

  BinaryMatrix F(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) F.set(i, j, r[i * N + j] != 0);
  return F;
}

BinaryMatrix build_FX(const RoundingSpec& spec) {
  const std::int64_t kappa = spec.kappa();
  if (spec.n < 1) throw std::invalid_argument("column count must be positive");
  if (kappa + 1 > spec.n) throw std::invalid_argument("kappa+1 exceeds the column count");
  const auto m = spec.X.size();
  const auto n = static_cast<std::size_t>(spec.n);
  if (std::all_of(spec.X.begin(), spec.X.end(), [](std::int64_t s) { return s == 0; }))
    return BinaryMatrix(m, n);
  return round_matrix(spec.source());
}

ZeroIndex::ZeroIndex(const BinaryMatrix& F) : m_(F.rows()), n_(F.cols()), base_(F.rows() + 1, 0) {
  for (std::size_t r = 0; r < m_; ++r) {
    for (std::size_t c = 0; c < n_; ++c)
      if (!F.at(r, c)) pos_.push_back(static_cast<std::int64_t>(r * n_ + c));
    base_[r + 1] = static_cast<std::int64_t>(pos_.size());
  }
  if (pos_.empty()) throw std::invalid_argument("matrix has no zeros");
}

std::int64_t ZeroIndex::linear(std::size_t r, std::int64_t d) const {
  if (r < 1 || r > m_) throw std::invalid_argument("row out of range");
  const auto Z = static_cast<std::int64_t>(pos_.size());
  const auto L = static_cast<std::int64_t>(m_ * n_);
  std::int64_t g = base_[r - 1] + d - 1;  // 0-based global zero ordinal
  std::int64_t q = g >= 0 ? g / Z : -((-g + Z - 1) / Z);
  return pos_[static_cast<std::size_t>(g - q * Z)] + q * L;
}

std::int64_t ZeroIndex::column(std::size_t r, std::int64_t d) const {
  const auto n = static_cast<std::int64_t>(n_);
  std::int64_t p = linear(r, d);
  return ((p % n) + n) % n + 1;
}

std::int64_t ZeroIndex::offset(std::size_t r, std::int64_t d) const {
  return linear(r, d) - static_cast<std::int64_t>((r - 1) * n_) + 1;
}

std::int64_t zero_index(const BinaryMatrix& F, std::size_t r, std::int64_t d) {
  return ZeroIndex(F).column(r, d);
}

Direction check_forward(const BinaryMatrix& F, const RationalMatrix& T, std::size_t r,
                        std::size_t h) {
  if (r < 1 || r > F.rows() || h < 1 || h > F.cols()) throw std::invalid_argument("position out of range");
  std::int64_t f = 0;
  Rational t;
  for (std::size_t j = 0; j < h; ++j) {
    f += F.at(r - 1, j);
    t += T.at(r - 1, j);
  }
  return f == t.ceil() ? Direction::Forward : Direction::Backward;
}

RoundingCheck check_rounding(const RationalMatrix& T, const BinaryMatrix& F) {
  RoundingCheck out;
  const std::size_t m = T.rows(), n = T.cols();
  auto small = [](const Rational& d) { return d < Rational(1) && d > Rational(-1); };
  Rational total;
  for (std::size_t i = 0; i < m; ++i) {
    Rational d;
    for (std::size_t j = 0; j < n; ++j) {
      d += T.at(i, j) - Rational(F.at(i, j));
      out.rows = out.rows && small(d);
    }
    total += d;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational d;
    for (std::size_t i = 0; i < m; ++i) {
      d += T.at(i, j) - Rational(F.at(i, j));
      out.columns = out.columns && small(d);
    }
  }
  out.total = small(total);
  return out;
}

BalanceCheck check_balance(const BinaryMatrix& F, std::span<const std::int64_t> row_sums) {
  BalanceCheck out;
  const std::size_t m = F.rows(), n = F.cols();
  if (row_sums.size() != m) throw std::invalid_argument("row-sum count mismatch");
  for (std::size_t i = 0; i < m; ++i) out.row_sums = out.row_sums && F.row_count(i) == row_sums[i];
  std::vector<std::int64_t> col(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) col[j] += F.at(i, j);
    auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    out.column_spread = std::max(out.column_spread, *hi - *lo);
  }
  std::vector<std::int64_t> row(m, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) row[i] += F.at(i, j);
    auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    out.row_spread = std::max(out.row_spread, *hi - *lo);
  }
  return out;
}

ZeroGapCheck check_zero_gaps(const BinaryMatrix& F, const RationalMatrix& T, std::int64_t max_e) {
  ZeroGapCheck out;
  const std::size_t m = F.rows(), n = F.cols();
  if (max_e < 0) max_e = static_cast<std::int64_t>(n);
  const ZeroIndex Z(F);
  const auto L = static_cast<std::int64_t>(m * n);
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(L) + 1, 0);
  for (std::size_t p = 0; p < static_cast<std::size_t>(L); ++p)
    prefix[p + 1] = prefix[p] + F.at(p / n, p % n);
  // Sum of the `len` entries following 0-based linear position p, cyclically.
  auto window = [&](std::int64_t p, std::int64_t len) {
    std::int64_t s = p + 1, e = p + 1 + len;
    auto cum = [&](std::int64_t x) { return (x / L) * prefix.back() + prefix[static_cast<std::size_t>(x % L)]; };
    return cum(e) - cum(s);
  };

  for (std::size_t i = 1; i <= m; ++i) {
    std::int64_t f = 0;
    Rational t;
    std::int64_t d = 0;
    for (std::size_t h = 1; h <= n; ++h) {
      f += F.at(i - 1, h - 1);
      t += T.at(i - 1, h - 1);
      const bool forward = f == t.ceil();
      const bool zero = !F.at(i - 1, h - 1);
      if (zero) ++d;
      const auto p = static_cast<std::int64_t>((i - 1) * n + h - 1);
      for (std::int64_t e = 1; e <= max_e; ++e) {
        if (forward && window(p, 2 * e) > e) ++out.forward_window;
        if (!zero) continue;
        std::int64_t gap = Z.offset(i, d + e) - Z.offset(i, d);
        if (forward && gap > 2 * e) ++out.forward_gap;
        if (!forward && gap > 2 * e + 2) ++out.backward_gap;
      }
      if (zero && !forward) ++out.backward_entries;
    }
  }

  std::int64_t maxz = 0;
  for (std::size_t s = 1; s <= m; ++s) maxz = std::max(maxz, Z.zeros_in_row(s));
  for (std::int64_t d = 1; d <= maxz; ++d) {
    std::int64_t lo = INT64_MAX;
    for (std::size_t s = 1; s <= m; ++s)
      if (Z.zeros_in_row(s) >= d) lo = std::min(lo, Z.offset(s, d));
    for (std::size_t r = 1; r <= m; ++r)
      for (std::int64_t e = 0; e <= max_e; ++e)
        if (Z.offset(r, d + e) - lo > 2 * e + 4) ++out.cross_gap;
  }
  return out;
}

std::string dump_matrix(const BinaryMatrix& F) {
  std::ostringstream os;
  os << F.rows() << ' ' << F.cols() << '\n';
  for (std::size_t r = 0; r < F.rows(); ++r) {
    for (std::size_t c = 0; c < F.cols(); ++c) os << (F.at(r, c) ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

std::vector<TaggedMatrix> parse_matrices(std::istream& in) {
  std::vector<TaggedMatrix> out;
  std::string line;
  int pending = -1;
  auto next_line = [&](std::string& l) {
    while (std::getline(in, l)) {
      auto p = l.find('#');
      if (p != std::string::npos) l.erase(p);
      while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.pop_back();
      auto q = l.find_first_not_of(" \t");
      if (q == std::string::npos) continue;
      l.erase(0, q);
      return true;
    }
    return false;
  };
  while (next_line(line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "STAGE") {
      if (!(ls >> pending) || pending < 2) throw std::invalid_argument("bad STAGE line: " + line);
      continue;
    }
    std::size_t m = 0, n = 0;
    std::istringstream hs(line);
    if (!(hs >> m >> n)) throw std::invalid_argument("expected matrix header 'm n', got: " + line);
    std::vector<std::string> rows;
    for (std::size_t r = 0; r < m; ++r) {
      if (!next_line(line)) throw std::invalid_argument("matrix ends early");
      if (line.size() != n) throw std::invalid_argument("matrix row has wrong width: " + line);
      rows.push_back(line);
    }
    int stage = pending >= 2 ? pending : (out.empty() ? 2 : out.back().stage + 1);
    out.push_back({stage, BinaryMatrix::from_rows(rows)});
    pending = -1;
  }
  return out;
}

}  // namespace gridcube
