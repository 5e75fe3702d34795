#include "csl/counting.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "csl/error.hpp"

namespace csl {

namespace {

const BigInt& zero_big() {
  static const BigInt zero = 0;
  return zero;
}

void require_nonnegative(std::int64_t value, const char* name) {
  if (value < 0) {
    throw Error(ErrorKind::BadParameters, std::string(name) + " must be non-negative");
  }
}

/// next[m] = sum_{l in L, l <= m} prev[m - l]. Contiguous sets use a sliding
/// window over prefix sums, so the cost is O(size) rather than O(size * |L|).
void convolve_parts(const RunSet& parts, const std::vector<BigInt>& prev,
                    std::vector<BigInt>& next) {
  const auto size = static_cast<std::int64_t>(prev.size());
  next.assign(prev.size(), BigInt(0));
  if (parts.kind() == RunSet::Kind::Interval) {
    std::vector<BigInt> prefix(prev.size() + 1);
    prefix[0] = 0;
    for (std::int64_t i = 0; i < size; ++i) prefix[i + 1] = prefix[i] + prev[i];
    const std::int64_t lo = parts.lmin();
    const std::int64_t hi = parts.bounded() ? *parts.lmax() : size;
    for (std::int64_t m = lo; m < size; ++m) {
      // sum of prev[j] for j in [m - hi, m - lo]
      const std::int64_t j_hi = m - lo;
      const std::int64_t j_lo = std::max<std::int64_t>(0, m - hi);
      next[m] = prefix[j_hi + 1] - prefix[j_lo];
    }
    return;
  }
  const auto elems = parts.elements_upto(size);
  for (std::int64_t m = 0; m < size; ++m) {
    auto& acc = next[m];
    for (auto ell : elems) {
      if (ell > m) break;
      acc += prev[m - ell];
    }
  }
}

std::int64_t ceil_half(std::int64_t r) { return (r + 1) / 2; }

/// S(n, w, r) from composition values of the zero blocks (sum n - w) and the one blocks (sum w).
template <typename Zeros, typename Ones>
BigInt wr_from_compositions(std::int64_t r, Zeros&& zeros_at, Ones&& ones_at) {
  const std::int64_t lo = r / 2;
  const std::int64_t hi = ceil_half(r);
  // Starts with a one: ceil(r/2) one-blocks; starts with a zero: ceil(r/2) zero-blocks.
  BigInt out = zeros_at(lo) * ones_at(hi);
  out += zeros_at(hi) * ones_at(lo);
  return out;
}

}  // namespace

BigInt Census::at(std::int64_t w, std::int64_t r) const {
  auto it = table.find({w, r});
  return it == table.end() ? BigInt(0) : it->second;
}

BigInt Census::weight_marginal(std::int64_t w) const {
  BigInt out = 0;
  for (const auto& [key, count] : table) {
    if (key.first == w) out += count;
  }
  return out;
}

BigInt Census::runs_marginal(std::int64_t r) const {
  BigInt out = 0;
  for (const auto& [key, count] : table) {
    if (key.second == r) out += count;
  }
  return out;
}

void for_each_composition_column(
    const RunSet& parts, std::int64_t max_sum, std::int64_t max_parts,
    const std::function<void(std::int64_t m, const std::vector<BigInt>& column)>& visit) {
  require_nonnegative(max_sum, "max_sum");
  require_nonnegative(max_parts, "max_parts");
  std::vector<BigInt> column(static_cast<std::size_t>(max_sum + 1), BigInt(0));
  column[0] = 1;
  std::vector<BigInt> next;
  visit(0, column);
  for (std::int64_t m = 1; m <= max_parts; ++m) {
    convolve_parts(parts, column, next);
    column.swap(next);
    visit(m, column);
  }
}

CompositionTable::CompositionTable(RunSet parts, std::int64_t max_sum, std::int64_t max_parts)
    : parts_(std::move(parts)), max_sum_(max_sum), max_parts_(max_parts) {
  columns_.reserve(static_cast<std::size_t>(max_parts + 1));
  for_each_composition_column(parts_, max_sum, max_parts,
                              [&](std::int64_t, const std::vector<BigInt>& column) {
                                columns_.push_back(column);
                              });
}

const BigInt& CompositionTable::at(std::int64_t n, std::int64_t m) const {
  if (n < 0 || m < 0 || n > max_sum_ || m > max_parts_) return zero_big();
  return columns_[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
}

BigInt count_total(const RunSet& set, std::int64_t n) {
  require_nonnegative(n, "n");
  if (n == 0) return 1;
  // c[m] = number of compositions of m with parts in L; every composition of n
  // gives two strings, one per choice of the first symbol.
  std::vector<BigInt> c(static_cast<std::size_t>(n + 1), BigInt(0));
  c[0] = 1;
  if (set.kind() == RunSet::Kind::Interval) {
    std::vector<BigInt> prefix(static_cast<std::size_t>(n + 2), BigInt(0));
    prefix[1] = 1;
    const std::int64_t lo = set.lmin();
    const std::int64_t hi = set.bounded() ? *set.lmax() : n;
    for (std::int64_t m = 1; m <= n; ++m) {
      if (m >= lo) c[m] = prefix[m - lo + 1] - prefix[std::max<std::int64_t>(0, m - hi)];
      prefix[m + 1] = prefix[m] + c[m];
    }
  } else {
    const auto elems = set.elements_upto(n);
    for (std::int64_t m = 1; m <= n; ++m) {
      for (auto ell : elems) {
        if (ell > m) break;
        c[m] += c[m - ell];
      }
    }
  }
  return 2 * c[n];
}

Census census(const RunSet& set, std::int64_t n) {
  require_nonnegative(n, "n");
  if (n > kMaxCubeCensus) {
    throw Error(ErrorKind::TooLarge, "cube census limited to n <= " +
                                         std::to_string(kMaxCubeCensus) +
                                         "; use census_fast");
  }
  const auto elems = set.elements_upto(n);
  const auto dim = static_cast<std::size_t>(n + 1);
  using Layer = std::vector<std::vector<BigInt>>;  // [length][weight]
  auto fresh_layer = [&] { return Layer(dim, std::vector<BigInt>(dim, BigInt(0))); };

  Census out;
  out.n = n;
  auto harvest = [&](const Layer& layer, std::int64_t r) {
    for (std::int64_t w = 0; w <= n; ++w) {
      const auto& v = layer[n][w];
      if (sgn(v) != 0) {
        out.table[{w, r}] = v;
        out.total += v;
      }
    }
  };

  // Seed layers r = 0, 1, 2 straight from the definition; the two-block
  // recurrence below is exact once the prefix keeps at least one run.
  Layer r0 = fresh_layer();
  r0[0][0] = 1;
  Layer r1 = fresh_layer();
  Layer r2 = fresh_layer();
  for (auto ell : elems) {
    r1[ell][ell] += 1;  // 1^ell
    r1[ell][0] += 1;    // 0^ell
  }
  for (auto ones : elems) {
    for (auto zeros : elems) {
      if (ones + zeros <= n) r2[ones + zeros][ones] += 2;  // 0^z 1^o and 1^o 0^z
    }
  }
  harvest(r0, 0);
  if (n >= 1) harvest(r1, 1);
  if (n >= 2) harvest(r2, 2);

  // S(len, w, r) = sum_{a,b in L} S(len - a - b, w - b, r - 2), a = appended zero
  // block, b = appended one block. Computed in two passes through
  // T(x, y) = sum_b S(x - b, y - b, r - 2).
  Layer older = std::move(r1);
  Layer old = std::move(r2);
  const std::int64_t max_runs = n / set.lmin();
  Layer diag = fresh_layer();
  for (std::int64_t r = 3; r <= max_runs; ++r) {
    for (auto& row : diag) std::fill(row.begin(), row.end(), BigInt(0));
    const Layer& src = older;  // layer r - 2
    for (std::int64_t x = 0; x <= n; ++x) {
      for (std::int64_t y = 0; y <= x; ++y) {
        auto& acc = diag[x][y];
        for (auto b : elems) {
          if (b > y) break;
          acc += src[x - b][y - b];
        }
      }
    }
    Layer layer = fresh_layer();
    for (std::int64_t len = 0; len <= n; ++len) {
      for (std::int64_t w = 0; w <= len; ++w) {
        auto& acc = layer[len][w];
        for (auto a : elems) {
          if (a > len - w) break;
          acc += diag[len - a][w];
        }
      }
    }
    harvest(layer, r);
    older = std::move(old);
    old = std::move(layer);
  }
  return out;
}

Census census_fast(const RunSet& set, std::int64_t n) {
  require_nonnegative(n, "n");
  Census out;
  out.n = n;
  if (n == 0) {
    out.table[{0, 0}] = 1;
    out.total = 1;
    return out;
  }
  const std::int64_t max_runs = n / set.lmin();
  const CompositionTable comp(set, n, ceil_half(max_runs));
  for (std::int64_t r = 1; r <= max_runs; ++r) {
    for (std::int64_t w = 0; w <= n; ++w) {
      BigInt v = wr_from_compositions(
          r, [&](std::int64_t k) -> const BigInt& { return comp.at(n - w, k); },
          [&](std::int64_t k) -> const BigInt& { return comp.at(w, k); });
      if (sgn(v) != 0) {
        out.total += v;
        out.table[{w, r}] = std::move(v);
      }
    }
  }
  return out;
}

BigInt count_two_sets(const RunSet& zeros, const RunSet& ones, std::int64_t n, std::int64_t w,
                      std::int64_t r) {
  if (n < 0 || w < 0 || r < 0 || w > n) return 0;
  if (r == 0) return n == 0 ? 1 : 0;
  const std::int64_t hi = ceil_half(r);
  std::vector<BigInt> zero_vals(static_cast<std::size_t>(hi + 1));
  std::vector<BigInt> one_vals(static_cast<std::size_t>(hi + 1));
  for_each_composition_column(zeros, n - w, hi,
                              [&](std::int64_t m, const std::vector<BigInt>& col) {
                                zero_vals[m] = col[n - w];
                              });
  for_each_composition_column(ones, w, hi, [&](std::int64_t m, const std::vector<BigInt>& col) {
    one_vals[m] = col[w];
  });
  return wr_from_compositions(
      r, [&](std::int64_t k) -> const BigInt& { return zero_vals[k]; },
      [&](std::int64_t k) -> const BigInt& { return one_vals[k]; });
}

BigInt count_wr_fast(const RunSet& set, std::int64_t n, std::int64_t w, std::int64_t r) {
  return count_two_sets(set, set, n, w, r);
}

BigInt compositions(const RunSet& parts, std::int64_t n, std::int64_t m) {
  if (n < 0 || m < 0) return 0;
  BigInt out = 0;
  for_each_composition_column(parts, n, m, [&](std::int64_t k, const std::vector<BigInt>& col) {
    if (k == m) out = col[n];
  });
  return out;
}

BigInt count_runs_marginal(const RunSet& set, std::int64_t n, std::int64_t r) {
  if (r < 1) throw Error(ErrorKind::BadParameters, "runs marginal needs r >= 1");
  return 2 * compositions(set, n, r);
}

BigInt count_weight_marginal(const RunSet& set, std::int64_t n, std::int64_t w) {
  if (n < 0 || w < 0 || w > n) return 0;
  if (n == 0) return 1;
  const std::int64_t max_half = ceil_half(n / set.lmin());
  std::vector<BigInt> zero_vals(static_cast<std::size_t>(max_half + 1));
  std::vector<BigInt> one_vals(static_cast<std::size_t>(max_half + 1));
  for_each_composition_column(set, std::max(w, n - w), max_half,
                              [&](std::int64_t m, const std::vector<BigInt>& col) {
                                zero_vals[m] = col[n - w];
                                one_vals[m] = col[w];
                              });
  BigInt out = 0;
  for (std::int64_t r = 1; r <= n / set.lmin(); ++r) {
    out += wr_from_compositions(
        r, [&](std::int64_t k) -> const BigInt& { return zero_vals[k]; },
        [&](std::int64_t k) -> const BigInt& { return one_vals[k]; });
  }
  return out;
}

BigInt count_sec(std::int64_t block_len, std::int64_t block_min_weight, std::int64_t n,
                 std::int64_t w) {
  if (block_len < 1 || block_min_weight < 0 || block_min_weight > block_len) {
    throw Error(ErrorKind::BadParameters, "SEC needs block_len >= 1 and 0 <= wb <= block_len");
  }
  require_nonnegative(n, "n");
  if (n % block_len != 0) {
    throw Error(ErrorKind::NotBlockAligned, "block length " + std::to_string(block_len) +
                                                " does not divide n = " + std::to_string(n));
  }
  if (w < 0 || w > n) return 0;
  std::vector<BigInt> weights;
  for (std::int64_t j = 0; j <= block_len; ++j) {
    weights.push_back(j >= block_min_weight
                          ? binomial_big(static_cast<unsigned long>(block_len),
                                         static_cast<unsigned long>(j))
                          : BigInt(0));
  }
  std::vector<BigInt> f(static_cast<std::size_t>(w + 1), BigInt(0));
  f[0] = 1;
  std::vector<BigInt> g;
  for (std::int64_t block = 0; block < n / block_len; ++block) {
    g.assign(f.size(), BigInt(0));
    for (std::int64_t x = 0; x <= w; ++x) {
      if (sgn(f[x]) == 0) continue;
      for (std::int64_t j = block_min_weight; j <= block_len && x + j <= w; ++j) {
        g[x + j] += f[x] * weights[j];
      }
    }
    f.swap(g);
  }
  return f[w];
}

BigInt count_manhattan(std::int64_t q, std::int64_t n, std::int64_t w) {
  if (q < 2) throw Error(ErrorKind::BadParameters, "Manhattan alphabet needs q >= 2");
  require_nonnegative(n, "n");
  if (w < 0 || w > n * (q - 1)) return 0;
  // Weak compositions of w into n parts from {0, ..., q-1}; windowed prefix sums.
  std::vector<BigInt> f(static_cast<std::size_t>(w + 1), BigInt(0));
  f[0] = 1;
  std::vector<BigInt> prefix(f.size() + 1);
  for (std::int64_t step = 0; step < n; ++step) {
    prefix[0] = 0;
    for (std::int64_t x = 0; x <= w; ++x) prefix[x + 1] = prefix[x] + f[x];
    for (std::int64_t x = 0; x <= w; ++x) {
      f[x] = prefix[x + 1] - prefix[std::max<std::int64_t>(0, x - q + 1)];
    }
  }
  return f[w];
}

Census oracle_census(const RunSet& set, std::int64_t n) {
  require_nonnegative(n, "n");
  if (n > kMaxOracleLength) {
    throw Error(ErrorKind::TooLarge, "brute-force oracle limited to n <= " +
                                         std::to_string(kMaxOracleLength));
  }
  // Deliberately naive: walk every string bit by bit.
  std::vector<bool> allowed(static_cast<std::size_t>(n + 1), false);
  for (std::int64_t ell = 1; ell <= n; ++ell) allowed[ell] = set.contains(ell);
  const auto dim = static_cast<std::size_t>(n + 1);
  std::vector<std::uint64_t> tally(dim * dim, 0);
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < limit; ++x) {
    std::int64_t runs = 0;
    std::int64_t run_len = 0;
    bool ok = true;
    for (std::int64_t i = 0; i < n && ok; ++i) {
      const bool bit = (x >> i) & 1U;
      const bool prev = i > 0 && ((x >> (i - 1)) & 1U);
      if (i == 0 || bit != prev) {
        if (i > 0 && !allowed[run_len]) ok = false;
        ++runs;
        run_len = 1;
      } else {
        ++run_len;
      }
    }
    if (n > 0 && ok && !allowed[run_len]) ok = false;
    if (!ok) continue;
    const auto weight = static_cast<std::size_t>(std::popcount(x));
    tally[weight * dim + static_cast<std::size_t>(runs)] += 1;
  }
  Census out;
  out.n = n;
  for (std::size_t w = 0; w < dim; ++w) {
    for (std::size_t r = 0; r < dim; ++r) {
      const auto count = tally[w * dim + r];
      if (count == 0) continue;
      BigInt v = static_cast<unsigned long>(count);
      out.total += v;
      out.table[{static_cast<std::int64_t>(w), static_cast<std::int64_t>(r)}] = v;
    }
  }
  return out;
}

std::string census_to_csv(const Census& c) {
  std::ostringstream os;
  os << "n,w,r,count\n";
  for (const auto& [key, count] : c.table) {
    os << c.n << ',' << key.first << ',' << key.second << ',' << to_decimal(count) << '\n';
  }
  return os.str();
}

nlohmann::json census_to_json(const Census& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, count] : c.table) {
    entries.push_back({{"w", key.first}, {"r", key.second}, {"count", to_decimal(count)}});
  }
  return {{"n", c.n}, {"total", to_decimal(c.total)}, {"entries", entries}};
}

}  // namespace csl
