#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace csl {

/// log2 of the two sides of an asymptotic code-size sandwich, evaluated at finite n.
struct BoundReport {
  std::string formula_id;
  double log2_lower = 0.0;
  double log2_upper = 0.0;
  nlohmann::json params;
  /// Set when t > d: the bounds then hold only for run-preserving deletions.
  bool run_preserving = false;
  /// log2 of the exact leading-order size, when known.
  std::optional<double> log2_exact_asymptotic;
  std::string label = "asymptotic-form evaluation";
};

/// Codes in the (d, k) constraint {d+1, ..., k+1} correcting t deletions;
/// k == nullopt means unbounded. Requires d >= 0, k > d, n >= d + 1, t >= 0.
BoundReport deletion_bounds(std::int64_t d, std::optional<std::int64_t> k, std::int64_t n,
                            std::int64_t t);

/// Root of x^{d+1} + x - 1 = 0 in (0, 1).
double volume_lambda(std::int64_t d);
/// rho_b = (1 - lambda) / (1 + (1 - lambda) d).
double volume_breakpoint(std::int64_t d);
/// Growth exponent of the error-pattern volume; rho in [0, 1/(d+1)].
double volume_exponent(std::int64_t d, double rho);
/// 1 - volume_exponent(d, rho).
double sphere_packing_rate(std::int64_t d, double rho);
/// (1/n) log2 of the number of d-constrained strings of length n with at most rho n runs.
double volume_finite_n(std::int64_t d, double rho, std::int64_t n);

/// Packing density constant c(t) of the timing-error bound.
double timing_packing_constant(std::int64_t t);
/// Codes over {0..q-1}^n correcting t timing errors; q >= 2, t >= 1, n >= 1.
BoundReport timing_bounds(std::int64_t q, std::int64_t n, std::int64_t t);

nlohmann::json to_json(const BoundReport& r);

}  // namespace csl
