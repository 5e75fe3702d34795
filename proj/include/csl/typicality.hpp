#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "csl/capacity.hpp"
#include "csl/constraints.hpp"

namespace csl {

/// Typical parameters of the unconstrained-weight ensemble S_L(n) as n grows.
struct TypicalProfile {
  RunSet set;
  double omega_star = 0.5;
  double rho_star = 0.0;  // 1 / A1(lambda)
  double lambda = 0.0;
  RunDistribution run_dist;  // P(l) = lambda^l

  /// Runs of length l (either symbol) per symbol: lambda^l rho*; 0 for l not in L.
  [[nodiscard]] double beta_star(std::int64_t ell) const;
  /// Adjacent run pairs (l, l') per symbol: lambda^(l + l') rho*.
  [[nodiscard]] double pair_freq(std::int64_t ell, std::int64_t ell_next) const;
  /// Runs of zeros of length >= min_len per symbol.
  [[nodiscard]] double tail_run_freq(std::int64_t min_len) const;
};

TypicalProfile typical_profile(const RunSet& set);

/// beta_star keyed by decimal run length, for l in L up to `max_ell`.
nlohmann::json to_json(const TypicalProfile& p, std::int64_t max_ell = 20);

struct ConcentrationWindow {
  double dw = 0.0;
  double dr = 0.0;
};

/// Default half-width n^{3/4} in each coordinate.
ConcentrationWindow default_window(std::int64_t n);

/// Cell used as the typical centre: (floor(omega* n), floor(rho* n)).
std::pair<std::int64_t, std::int64_t> typical_center(const TypicalProfile& p, std::int64_t n);

/// Exact fraction of S_L(n) with |w - w0| + |r - r0| <= dw + dr around typical_center.
double concentration_mass(const RunSet& set, std::int64_t n, ConcentrationWindow window);
/// 1 - concentration_mass, summed over the complement so small values keep full precision.
double concentration_tail(const RunSet& set, std::int64_t n, ConcentrationWindow window);

struct SampleStats {
  std::int64_t n = 0;
  std::int64_t count = 0;
  std::uint64_t seed = 0;
  std::int64_t total_weight = 0;
  std::int64_t total_runs = 0;
  std::int64_t rejections = 0;
  std::map<std::int64_t, std::int64_t> histogram;   // l -> runs of length l over all samples
  std::map<std::int64_t, std::int64_t> histogram_sq; // l -> sum over samples of (runs of length l)^2

  [[nodiscard]] double mean_omega() const;
  [[nodiscard]] double mean_rho() const;
  /// Runs of length l per symbol, averaged over samples.
  [[nodiscard]] double beta_hat(std::int64_t ell) const;
  /// Standard error of beta_hat from the per-sample spread.
  [[nodiscard]] double beta_stderr(std::int64_t ell) const;

  friend bool operator==(const SampleStats&, const SampleStats&) = default;
};

inline constexpr std::int64_t kMaxSamplerRejections = 1'000'000;

/// Draws `count` length-n sequences by concatenating runs i.i.d. from P(l) = lambda^l,
/// starting with a fair random symbol. A sequence whose truncated last run falls
/// outside L is discarded and redrawn. Sample i uses its own stream seeded by
/// (seed, i), so the result does not depend on `threads` (0 = CSL_THREADS or hardware).
SampleStats sample_sequences(const RunSet& set, std::int64_t n, std::int64_t count,
                             std::uint64_t seed, unsigned threads = 0);

nlohmann::json to_json(const SampleStats& s);

struct GoodnessOfFit {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
  /// Tail bins are merged until every expected count is >= 5.
  std::int64_t bins = 0;
};

/// Chi-square test of the run-length histogram against P(l) = lambda^l.
GoodnessOfFit chi_square_gof(const SampleStats& s, const TypicalProfile& p);

/// CSV with header ell,expected,observed.
std::string histogram_to_csv(const SampleStats& s, const TypicalProfile& p);

/// Worker count: CSL_THREADS when set and positive, else hardware concurrency.
unsigned default_threads();

}  // namespace csl
