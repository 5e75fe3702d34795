#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "csl/bigint.hpp"
#include "csl/constraints.hpp"

namespace csl {

/// Exact counts S_L(n, w, r) of length-n binary strings with weight w and r runs,
/// all run lengths in L. Only non-zero cells are stored.
struct Census {
  std::int64_t n = 0;
  std::map<std::pair<std::int64_t, std::int64_t>, BigInt> table;  // (w, r) -> count
  BigInt total;

  [[nodiscard]] BigInt at(std::int64_t w, std::int64_t r) const;
  /// S_L(n, w, *)
  [[nodiscard]] BigInt weight_marginal(std::int64_t w) const;
  /// S_L(n, *, r)
  [[nodiscard]] BigInt runs_marginal(std::int64_t r) const;

  friend bool operator==(const Census& a, const Census& b) {
    return a.n == b.n && a.table == b.table && a.total == b.total;
  }
};

/// Largest n accepted by the cube recurrence in census().
inline constexpr std::int64_t kMaxCubeCensus = 256;
/// Largest n accepted by the brute-force oracle (2^n strings).
inline constexpr std::int64_t kMaxOracleLength = 24;

/// C_L(n, m): the number of m-tuples of parts from L summing to n, for all
/// n <= max_sum and m <= max_parts.
class CompositionTable {
 public:
  CompositionTable(RunSet parts, std::int64_t max_sum, std::int64_t max_parts);

  [[nodiscard]] const RunSet& parts() const noexcept { return parts_; }
  [[nodiscard]] std::int64_t max_sum() const noexcept { return max_sum_; }
  [[nodiscard]] std::int64_t max_parts() const noexcept { return max_parts_; }

  /// Zero outside the tabulated range and for infeasible (n, m).
  [[nodiscard]] const BigInt& at(std::int64_t n, std::int64_t m) const;

 private:
  RunSet parts_;
  std::int64_t max_sum_;
  std::int64_t max_parts_;
  std::vector<std::vector<BigInt>> columns_;  // columns_[m][n]
};

/// Streams the columns C_L(., m) for m = 0..max_parts, each of length max_sum + 1.
/// Memory stays O(max_sum) regardless of max_parts.
void for_each_composition_column(
    const RunSet& parts, std::int64_t max_sum, std::int64_t max_parts,
    const std::function<void(std::int64_t m, const std::vector<BigInt>& column)>& visit);

/// S_L(n), with S_L(0) = 1.
BigInt count_total(const RunSet& set, std::int64_t n);

/// Full (w, r) table from the two-block recurrence. n <= kMaxCubeCensus (TooLarge).
Census census(const RunSet& set, std::int64_t n);

/// Full (w, r) table assembled from composition products; the scalable path.
Census census_fast(const RunSet& set, std::int64_t n);

/// S_L(n, w, r) from the composition identity.
BigInt count_wr_fast(const RunSet& set, std::int64_t n, std::int64_t w, std::int64_t r);

/// S_L(n, *, r) = 2 C_L(n, r); requires r >= 1.
BigInt count_runs_marginal(const RunSet& set, std::int64_t n, std::int64_t r);

/// S_L(n, w, *).
BigInt count_weight_marginal(const RunSet& set, std::int64_t n, std::int64_t w);

/// C_L(n, m), with C_L(0, 0) = 1.
BigInt compositions(const RunSet& parts, std::int64_t n, std::int64_t m);

/// Strings whose runs of zeros lie in `zeros` and runs of ones lie in `ones`.
BigInt count_two_sets(const RunSet& zeros, const RunSet& ones, std::int64_t n, std::int64_t w,
                      std::int64_t r);

/// Concatenations of length-`block_len` blocks, each of weight >= `block_min_weight`,
/// with total length n and weight w. NotBlockAligned unless block_len divides n.
BigInt count_sec(std::int64_t block_len, std::int64_t block_min_weight, std::int64_t n,
                 std::int64_t w);

/// Sequences over {0, ..., q-1} of length n with coordinate sum w.
BigInt count_manhattan(std::int64_t q, std::int64_t n, std::int64_t w);

/// Brute-force census by enumerating all 2^n strings (n <= kMaxOracleLength).
Census oracle_census(const RunSet& set, std::int64_t n);

/// CSV with header n,w,r,count; counts as unbounded decimal integers.
std::string census_to_csv(const Census& c);
nlohmann::json census_to_json(const Census& c);

}  // namespace csl
