#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>

#include <json.hpp>

#include "csl/constraints.hpp"

namespace csl {

/// Sentinel capacity of points outside the admissible region.
struct NegativeInfinity {
  friend bool operator==(NegativeInfinity, NegativeInfinity) = default;
};

using Sigma = std::variant<double, NegativeInfinity>;

/// H(p) in bits; H(0) = H(1) = 0.
double binary_entropy(double p);

/// Geometric-form run-length law P(l) = normalizer * base^l on `support`, or a
/// point mass when `atom` is set (base and normalizer are then unused).
struct RunDistribution {
  RunSet support;
  double base = 1.0;
  double normalizer = 1.0;
  double mean = 0.0;
  std::optional<std::int64_t> atom;

  [[nodiscard]] double probability(std::int64_t ell) const;
  /// Shannon entropy in bits.
  [[nodiscard]] double entropy_bits() const;
};

struct CapacityResult {
  Sigma sigma = 0.0;
  RegionLocation region = RegionLocation::Interior;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> gamma;
  double log_term_coefficient = 0.0;
  std::optional<RunDistribution> dist0;
  std::optional<RunDistribution> dist1;
  /// Within 10 edge tolerances of a region corner; values there are ill-conditioned.
  bool near_corner = false;

  [[nodiscard]] bool is_outside() const noexcept {
    return std::holds_alternative<NegativeInfinity>(sigma);
  }
  /// Finite sigma in bits; CapacityOutOfRange for the sentinel.
  [[nodiscard]] double bits() const;
};

/// Unique root of A(x) = 1 in (0, 1).
double solve_lambda(const RunSet& set);

/// sigma_L(omega, rho). Outside the region the sentinel is returned, not an error.
CapacityResult capacity_wr(const RunSet& set, ParamPoint p, double tol = kDefaultEdgeTolerance);

/// sigma_L(omega, *), the supremum over rho. OutOfRange outside the weight range.
CapacityResult capacity_w(const RunSet& set, double omega);

/// sigma_L(*, rho), the supremum over omega. OutOfRange outside [1/lmax, 1/lmin].
CapacityResult capacity_r(const RunSet& set, double rho);

/// sigma_L(*, *) = -log lambda.
CapacityResult capacity_star(const RunSet& set);

/// Zero runs constrained by `zeros`, one runs by `ones`. OutOfRange outside the region.
CapacityResult capacity_two_sets(const RunSet& zeros, const RunSet& ones, ParamPoint p,
                                 double tol = kDefaultEdgeTolerance);

/// Two-set versions of the weight-only and runs-only suprema.
CapacityResult capacity_two_sets_w(const RunSet& zeros, const RunSet& ones, double omega);
CapacityResult capacity_two_sets_r(const RunSet& zeros, const RunSet& ones, double rho);
CapacityResult capacity_two_sets_star(const RunSet& zeros, const RunSet& ones);

/// Open weight range (lo, hi) on which sigma(omega, *) > 0.
std::pair<double, double> weight_range(const RunSet& zeros, const RunSet& ones);

/// argmax over rho of sigma_L(omega, rho).
double rho_star_omega(const RunSet& set, double omega);

/// Blocks of length lb with weight >= wb, 0 <= wb <= lb. OutOfRange unless wb/lb <= omega <= 1.
CapacityResult capacity_sec(std::int64_t lb, std::int64_t wb, double omega);

struct SecOptimum {
  double omega_star = 0.0;
  double sigma_star = 0.0;
};
SecOptimum sec_optimum(std::int64_t lb, std::int64_t wb);

/// mu_q(omega), the growth rate of sequences over {0..q-1} with mean omega.
CapacityResult capacity_manhattan(std::int64_t q, double omega);

struct NoConstraint {};
struct WeightConstraint {
  double omega = 0.5;
};
struct RunsConstraint {
  double rho = 0.5;
};
struct WeightRunsConstraint {
  ParamPoint point;
};
using DistributionConstraint =
    std::variant<NoConstraint, WeightConstraint, RunsConstraint, WeightRunsConstraint>;

/// Maximum-entropy run-length laws. `second` is the one-run law; it is absent
/// when a single law describes both symbols (none / runs constraints).
struct OptimalDistributions {
  RunDistribution first;
  std::optional<RunDistribution> second;
  /// Capacity the laws achieve, in bits per symbol.
  double sigma = 0.0;
  /// H(P0, P1) / E[L0 + L1] in bits per symbol.
  [[nodiscard]] double entropy_rate() const;
};

OptimalDistributions optimal_distributions(const RunSet& set, const DistributionConstraint& c);
OptimalDistributions optimal_distributions(const RunSet& zeros, const RunSet& ones,
                                           const DistributionConstraint& c);

nlohmann::json to_json(const RunDistribution& d);
nlohmann::json to_json(const CapacityResult& r);
/// Numbers, or the string "-inf" for the sentinel.
nlohmann::json sigma_to_json(const Sigma& s);

}  // namespace csl
