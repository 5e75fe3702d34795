#include "csl/channel_bounds.hpp"

#include <cmath>
#include <numbers>

#include "csl/bigint.hpp"
#include "csl/capacity.hpp"
#include "csl/counting.hpp"
#include "csl/error.hpp"
#include "csl/typicality.hpp"

namespace csl {

namespace {

double log2_factorial(std::int64_t t) {
  return std::lgamma(static_cast<double>(t) + 1.0) / std::numbers::ln2;
}

void check_volume_args(std::int64_t d, double rho) {
  if (d < 0) throw Error(ErrorKind::BadParameters, "d must be >= 0");
  const double top = 1.0 / static_cast<double>(d + 1);
  if (!(rho >= 0.0 && rho <= top + 1e-15)) {
    throw Error(ErrorKind::OutOfRange,
                "rho " + std::to_string(rho) + " outside [0, " + std::to_string(top) + "]");
  }
}

}  // namespace

BoundReport deletion_bounds(std::int64_t d, std::optional<std::int64_t> k, std::int64_t n,
                            std::int64_t t) {
  if (d < 0 || n < 1 || t < 0 || (k && *k <= d)) {
    throw Error(ErrorKind::BadParameters, "deletion bounds need d >= 0, k > d, n >= 1, t >= 0");
  }
  const RunSet set = dk_runset(d, k);
  const auto profile = typical_profile(set);
  const double lambda = profile.lambda;
  const BigInt total = count_total(set, n);
  if (total == 0) {
    throw Error(ErrorKind::BadParameters, "no constrained sequence of length " + std::to_string(n));
  }
  const double log2_s = log2_big(total);
  const double tt = static_cast<double>(t);

  BoundReport r;
  r.formula_id = "deletion-dk";
  r.log2_lower = log2_s - tt * std::log2(profile.rho_star * static_cast<double>(n));
  // lambda^t t! / (1 - lambda^{d+1})^t
  const double log2_factor = tt * std::log2(lambda) + log2_factorial(t) -
                             tt * std::log2(1.0 - std::pow(lambda, static_cast<double>(d + 1)));
  if (log2_factor < -1e-12) {
    throw Error(ErrorKind::ConvergenceFailure, "deletion upper-bound prefactor below 1");
  }
  r.log2_upper = r.log2_lower + std::max(log2_factor, 0.0);
  r.run_preserving = t > d;
  if (!k && t == 1) {
    r.log2_exact_asymptotic =
        log2_s - std::log2(static_cast<double>(n)) +
        std::log2(static_cast<double>(d) + 1.0 / (1.0 - lambda));
  }
  r.params = {{"d", d}, {"n", n}, {"t", t}, {"lambda", lambda}, {"rho_star", profile.rho_star}};
  if (k) {
    r.params["k"] = *k;
  } else {
    r.params["k"] = "inf";
  }
  return r;
}

double volume_lambda(std::int64_t d) {
  if (d < 0) throw Error(ErrorKind::BadParameters, "d must be >= 0");
  return solve_lambda(interval_from(d + 1));
}

double volume_breakpoint(std::int64_t d) {
  const double one_minus = 1.0 - volume_lambda(d);
  return one_minus / (1.0 + one_minus * static_cast<double>(d));
}

double volume_exponent(std::int64_t d, double rho) {
  check_volume_args(d, rho);
  const double dd = static_cast<double>(d);
  if (rho < volume_breakpoint(d)) {
    const double free = 1.0 - dd * rho;
    return free * binary_entropy(rho / free);
  }
  return -std::log2(volume_lambda(d));
}

double sphere_packing_rate(std::int64_t d, double rho) {
  const double v = volume_exponent(d, rho);
  if (v > 1.0 + 1e-12) throw Error(ErrorKind::ConvergenceFailure, "volume exponent above 1");
  return 1.0 - v;
}

double volume_finite_n(std::int64_t d, double rho, std::int64_t n) {
  check_volume_args(d, rho);
  if (n < 1) throw Error(ErrorKind::BadParameters, "n must be >= 1");
  const RunSet set = interval_from(d + 1);
  const auto max_runs = static_cast<std::int64_t>(std::floor(rho * static_cast<double>(n) + 1e-9));
  BigInt sum = 0;
  for_each_composition_column(set, n, max_runs,
                              [&](std::int64_t m, const std::vector<BigInt>& column) {
                                if (m >= 1) sum += 2 * column[static_cast<std::size_t>(n)];
                              });
  if (sgn(sum) == 0) return 0.0;
  return log2_big(sum) / static_cast<double>(n);
}

double timing_packing_constant(std::int64_t t) {
  if (t < 1) throw Error(ErrorKind::BadParameters, "t must be >= 1");
  // Densities of Manhattan-metric packings: exact for t = 1, 2, a general bound beyond.
  if (t == 1) return 0.5;
  if (t == 2) return 0.25;
  return 1.0 / (2.0 * static_cast<double>(t) + 1.0);
}

BoundReport timing_bounds(std::int64_t q, std::int64_t n, std::int64_t t) {
  if (q < 2 || n < 1 || t < 1) {
    throw Error(ErrorKind::BadParameters, "timing bounds need q >= 2, n >= 1, t >= 1");
  }
  const double lq = std::log2(static_cast<double>(q));
  const double lq1 = std::log2(static_cast<double>(q - 1));
  const double tt = static_cast<double>(t);
  const double base = static_cast<double>(n) * lq - tt * std::log2(static_cast<double>(n));
  BoundReport r;
  r.formula_id = "timing-q";
  r.log2_lower = base + tt + std::log2(timing_packing_constant(t)) - tt * lq1;
  r.log2_upper = base + 2.0 * tt * lq + log2_factorial(t) - tt - 2.0 * tt * lq1;
  if (r.log2_upper < r.log2_lower - 1e-12) {
    throw Error(ErrorKind::ConvergenceFailure, "timing bounds out of order");
  }
  r.params = {{"q", q}, {"n", n}, {"t", t}, {"c_t", timing_packing_constant(t)}};
  return r;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["formula_id"] = r.formula_id;
  j["log2_lower"] = r.log2_lower;
  j["log2_upper"] = r.log2_upper;
  j["params"] = r.params;
  j["run_preserving"] = r.run_preserving;
  if (r.log2_exact_asymptotic) j["log2_exact_asymptotic"] = *r.log2_exact_asymptotic;
  j["label"] = r.label;
  return j;
}

}  // namespace csl
