#include "csl/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "csl/bigint.hpp"
#include "csl/detail/tilted.hpp"
#include "csl/error.hpp"

namespace csl {

namespace {

using detail::Eval;
using detail::Tilted;

constexpr double kLn2 = std::numbers::ln2;
/// Snap distance for the end points of one-dimensional capacity functions.
constexpr double kEndpointTol = 1e-12;

struct Side {
  double t = 0.0;  // natural log of the root
  double log_z = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

Side solve_side(const Tilted& family, double mean) {
  const double t = family.solve_mean(mean);
  const auto m = family.moments(t);
  return {t, m.log_z, mean, m.variance};
}

bool strictly_inside(const Tilted& family, double mean) {
  return mean > family.min_point() && mean < family.max_point();
}

RunDistribution law(const RunSet& support, const Side& s) {
  RunDistribution d;
  d.support = support;
  d.base = std::exp(s.t);
  d.normalizer = std::exp(-s.log_z);
  d.mean = s.mean;
  return d;
}

RunDistribution point_mass(const RunSet& support, std::int64_t ell) {
  RunDistribution d;
  d.support = support;
  d.mean = static_cast<double>(ell);
  d.atom = ell;
  return d;
}

void require_two_elements(const RunSet& set) {
  const auto card = set.cardinality();
  if (card && *card < 2) {
    throw Error(ErrorKind::BadParameters, "capacity needs at least two run lengths, got " +
                                              set.to_string());
  }
}

CapacityResult zero_capacity(RegionLocation region) {
  CapacityResult r;
  r.sigma = 0.0;
  r.region = region;
  r.log_term_coefficient = 0.0;
  return r;
}

CapacityResult interior(const RunSet& zeros, const RunSet& ones, ParamPoint p) {
  const auto f0 = Tilted::from_runset(zeros);
  const auto f1 = Tilted::from_runset(ones);
  const double m0 = 2.0 * (1.0 - p.omega) / p.rho;
  const double m1 = 2.0 * p.omega / p.rho;
  const Side a = solve_side(f0, m0);
  const Side b = solve_side(f1, m1);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = (-(1.0 - p.omega) * a.t - p.omega * b.t + 0.5 * p.rho * (a.log_z + b.log_z)) / kLn2;
  r.alpha = std::exp(a.t);
  r.beta = std::exp(b.t);
  r.gamma = std::exp(-0.5 * (a.log_z + b.log_z));
  r.log_term_coefficient = -1.0;
  r.dist0 = law(zeros, a);
  r.dist1 = law(ones, b);
  return r;
}

/// One symbol's runs pinned at `ell` (zero entropy); the other symbol's law is solved.
CapacityResult edge(const RunSet& zeros, const RunSet& ones, ParamPoint p, RegionLocation loc) {
  const bool ones_pinned =
      loc == RegionLocation::EdgeUpperLeft || loc == RegionLocation::EdgeLowerRight;
  const RunSet& pinned = ones_pinned ? ones : zeros;
  const RunSet& free = ones_pinned ? zeros : ones;
  const bool upper = loc == RegionLocation::EdgeUpperLeft || loc == RegionLocation::EdgeUpperRight;
  if (!upper && !pinned.bounded()) return zero_capacity(loc);  // the rho = 0 edge

  const std::int64_t ell = upper ? pinned.lmin() : *pinned.lmax();
  const double pinned_share = ones_pinned ? p.omega : 1.0 - p.omega;
  const double rho = 2.0 * pinned_share / static_cast<double>(ell);
  const double free_mean = 2.0 * (1.0 - pinned_share) / rho;
  const auto family = Tilted::from_runset(free);
  if (!strictly_inside(family, free_mean)) return zero_capacity(RegionLocation::Corner);

  const Side s = solve_side(family, free_mean);
  CapacityResult r;
  r.region = loc;
  r.sigma = (-(1.0 - pinned_share) * s.t + 0.5 * rho * s.log_z) / kLn2;
  r.alpha = std::exp(s.t);
  r.log_term_coefficient = -0.5;
  if (ones_pinned) {
    r.dist0 = law(free, s);
    r.dist1 = point_mass(pinned, ell);
  } else {
    r.dist0 = point_mass(pinned, ell);
    r.dist1 = law(free, s);
  }
  return r;
}

CapacityResult pair_capacity(const RunSet& zeros, const RunSet& ones, ParamPoint p, double tol) {
  const auto loc = classify(zeros, ones, p, tol);
  switch (loc) {
    case RegionLocation::Outside: {
      CapacityResult r;
      r.sigma = NegativeInfinity{};
      r.region = loc;
      return r;
    }
    case RegionLocation::Corner:
      return zero_capacity(loc);
    case RegionLocation::Interior:
      return interior(zeros, ones, p);
    default:
      return edge(zeros, ones, p, loc);
  }
}

struct WeightOptimum {
  double rho = 0.0;
  CapacityResult result;
};

/// sup over rho at fixed omega: the optimal rho makes A0(alpha) A1(beta) = 1.
WeightOptimum weight_optimum(const RunSet& zeros, const RunSet& ones, double omega) {
  const auto [lo, hi] = weight_range(zeros, ones);
  if (omega < lo - kEndpointTol || omega > hi + kEndpointTol) {
    throw Error(ErrorKind::OutOfRange, "omega " + std::to_string(omega) +
                                           " outside the weight range [" + std::to_string(lo) +
                                           ", " + std::to_string(hi) + "]");
  }
  const double rho_hi = std::min(2.0 * omega / static_cast<double>(ones.lmin()),
                                 2.0 * (1.0 - omega) / static_cast<double>(zeros.lmin()));
  if (omega <= lo + kEndpointTol || omega >= hi - kEndpointTol) {
    return {std::max(rho_hi, 0.0), zero_capacity(RegionLocation::Corner)};
  }
  const double rho_lo = std::max(2.0 * omega / ones.lmax_real(),
                                 2.0 * (1.0 - omega) / zeros.lmax_real());
  const auto f0 = Tilted::from_runset(zeros);
  const auto f1 = Tilted::from_runset(ones);

  // Increasing in rho: -(log A0 + log A1). Means beyond the tail bracket count
  // as rho too small; means at or below lmin count as rho too large.
  auto g = [&](double rho) -> Eval {
    const double m0 = 2.0 * (1.0 - omega) / rho;
    const double m1 = 2.0 * omega / rho;
    if (m0 <= f0.min_point() || m1 <= f1.min_point()) return {1e300, 1.0};
    if (m0 >= f0.max_point() || m1 >= f1.max_point()) return {-1e300, 1.0};
    try {
      const Side a = solve_side(f0, m0);
      const Side b = solve_side(f1, m1);
      const double slope = (m0 * m0 / a.variance + m1 * m1 / b.variance) / rho;
      return {-(a.log_z + b.log_z), slope};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ConvergenceFailure) throw;
      return {-1e300, 1.0};
    }
  };
  const double rho = detail::solve_increasing(g, rho_lo, rho_hi, 1e-13, "optimal rho");

  const Side a = solve_side(f0, 2.0 * (1.0 - omega) / rho);
  const Side b = solve_side(f1, 2.0 * omega / rho);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = (-(1.0 - omega) * a.t - omega * b.t) / kLn2;
  r.alpha = std::exp(a.t);
  r.beta = std::exp(b.t);
  r.log_term_coefficient = -0.5;
  r.dist0 = law(zeros, a);
  r.dist1 = law(ones, b);
  return {rho, r};
}

double distance(ParamPoint a, ParamPoint b) { return std::hypot(a.omega - b.omega, a.rho - b.rho); }

}  // namespace

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double RunDistribution::probability(std::int64_t ell) const {
  if (atom) return ell == *atom ? 1.0 : 0.0;
  if (!support.contains(ell)) return 0.0;
  return std::exp(std::log(normalizer) + static_cast<double>(ell) * std::log(base));
}

double RunDistribution::entropy_bits() const {
  if (atom) return 0.0;
  return -std::log2(normalizer) - mean * std::log2(base);
}

double CapacityResult::bits() const {
  if (is_outside()) throw Error(ErrorKind::CapacityOutOfRange, "capacity is -inf outside the region");
  return std::get<double>(sigma);
}

double solve_lambda(const RunSet& set) {
  require_two_elements(set);
  return std::exp(Tilted::from_runset(set).solve_unit_partition());
}

CapacityResult capacity_wr(const RunSet& set, ParamPoint p, double tol) {
  require_two_elements(set);
  auto r = pair_capacity(set, set, p, tol);
  if (!r.is_outside() && r.region != RegionLocation::Corner) {
    for (const auto& c : region_corners(set)) {
      if (distance(c, p) < 10.0 * tol) r.near_corner = true;
    }
  }
  return r;
}

CapacityResult capacity_two_sets(const RunSet& zeros, const RunSet& ones, ParamPoint p,
                                 double tol) {
  require_two_elements(zeros);
  require_two_elements(ones);
  auto r = pair_capacity(zeros, ones, p, tol);
  if (r.is_outside()) {
    throw Error(ErrorKind::OutOfRange, "point (" + std::to_string(p.omega) + ", " +
                                           std::to_string(p.rho) + ") outside the region");
  }
  return r;
}

std::pair<double, double> weight_range(const RunSet& zeros, const RunSet& ones) {
  const double lmin0 = static_cast<double>(zeros.lmin());
  const double lmin1 = static_cast<double>(ones.lmin());
  const double lo = zeros.bounded() ? lmin1 / (lmin1 + zeros.lmax_real()) : 0.0;
  const double hi = ones.bounded() ? ones.lmax_real() / (lmin0 + ones.lmax_real()) : 1.0;
  return {lo, hi};
}

CapacityResult capacity_w(const RunSet& set, double omega) {
  require_two_elements(set);
  return weight_optimum(set, set, omega).result;
}

CapacityResult capacity_two_sets_w(const RunSet& zeros, const RunSet& ones, double omega) {
  require_two_elements(zeros);
  require_two_elements(ones);
  return weight_optimum(zeros, ones, omega).result;
}

double rho_star_omega(const RunSet& set, double omega) {
  require_two_elements(set);
  return weight_optimum(set, set, omega).rho;
}

CapacityResult capacity_r(const RunSet& set, double rho) {
  require_two_elements(set);
  const double lo = 1.0 / set.lmax_real();
  const double hi = 1.0 / static_cast<double>(set.lmin());
  if (rho < lo - kEndpointTol || rho > hi + kEndpointTol) {
    throw Error(ErrorKind::OutOfRange, "rho " + std::to_string(rho) + " outside [" +
                                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (rho <= lo + kEndpointTol || rho >= hi - kEndpointTol) {
    return zero_capacity(RegionLocation::Corner);
  }
  const Side s = solve_side(Tilted::from_runset(set), 1.0 / rho);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = (-s.t + rho * s.log_z) / kLn2;
  r.alpha = std::exp(s.t);
  r.log_term_coefficient = -0.5;
  r.dist0 = law(set, s);
  return r;
}

CapacityResult capacity_two_sets_r(const RunSet& zeros, const RunSet& ones, double rho) {
  require_two_elements(zeros);
  require_two_elements(ones);
  const auto f0 = Tilted::from_runset(zeros);
  const auto f1 = Tilted::from_runset(ones);
  const auto both = Tilted::product(f0, f1);
  const double lo = 2.0 / both.max_point();
  const double hi = 2.0 / both.min_point();
  if (rho < lo - kEndpointTol || rho > hi + kEndpointTol) {
    throw Error(ErrorKind::OutOfRange, "rho " + std::to_string(rho) + " outside [" +
                                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (rho <= lo + kEndpointTol || rho >= hi - kEndpointTol) {
    return zero_capacity(RegionLocation::Corner);
  }
  const double t = both.solve_mean(2.0 / rho);
  const auto m0 = f0.moments(t);
  const auto m1 = f1.moments(t);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = (-t + 0.5 * rho * (m0.log_z + m1.log_z)) / kLn2;
  r.alpha = std::exp(t);
  r.beta = std::exp(t);
  r.log_term_coefficient = -0.5;
  r.dist0 = law(zeros, {t, m0.log_z, m0.mean, m0.variance});
  r.dist1 = law(ones, {t, m1.log_z, m1.mean, m1.variance});
  return r;
}

CapacityResult capacity_star(const RunSet& set) {
  const double lambda = solve_lambda(set);
  const auto family = Tilted::from_runset(set);
  const auto m = family.moments(std::log(lambda));
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = -std::log2(lambda);
  r.lambda = lambda;
  r.log_term_coefficient = 0.0;
  r.dist0 = law(set, {std::log(lambda), 0.0, m.mean, m.variance});
  return r;
}

CapacityResult capacity_two_sets_star(const RunSet& zeros, const RunSet& ones) {
  require_two_elements(zeros);
  require_two_elements(ones);
  const auto f0 = Tilted::from_runset(zeros);
  const auto f1 = Tilted::from_runset(ones);
  const double t = Tilted::product(f0, f1).solve_unit_partition();
  const auto m0 = f0.moments(t);
  const auto m1 = f1.moments(t);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = -t / kLn2;
  r.lambda = std::exp(t);
  r.log_term_coefficient = 0.0;
  r.dist0 = law(zeros, {t, m0.log_z, m0.mean, m0.variance});
  r.dist1 = law(ones, {t, m1.log_z, m1.mean, m1.variance});
  return r;
}

CapacityResult capacity_sec(std::int64_t lb, std::int64_t wb, double omega) {
  if (lb < 1 || wb < 0 || wb > lb) {
    throw Error(ErrorKind::BadParameters, "need lb >= 1 and 0 <= wb <= lb");
  }
  const double lo = static_cast<double>(wb) / static_cast<double>(lb);
  if (omega < lo - kEndpointTol || omega > 1.0 + kEndpointTol) {
    throw Error(ErrorKind::OutOfRange,
                "omega " + std::to_string(omega) + " outside [" + std::to_string(lo) + ", 1]");
  }
  if (omega <= lo + kEndpointTol || omega >= 1.0 - kEndpointTol) {
    return zero_capacity(RegionLocation::Corner);
  }
  std::vector<std::pair<std::int64_t, double>> weights;
  const double top = std::lgamma(static_cast<double>(lb) + 1.0);
  for (std::int64_t j = wb; j <= lb; ++j) {
    weights.emplace_back(j, top - std::lgamma(static_cast<double>(j) + 1.0) -
                                std::lgamma(static_cast<double>(lb - j) + 1.0));
  }
  const auto family = Tilted::from_log_weights(std::move(weights));
  const double target = omega * static_cast<double>(lb);
  const double t = family.solve_mean(target);
  const auto m = family.moments(t);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = (-target * t + m.log_z) / (static_cast<double>(lb) * kLn2);
  r.beta = std::exp(t);
  r.log_term_coefficient = -0.5;
  return r;
}

SecOptimum sec_optimum(std::int64_t lb, std::int64_t wb) {
  if (lb < 1 || wb < 0 || wb > lb) {
    throw Error(ErrorKind::BadParameters, "need lb >= 1 and 0 <= wb <= lb");
  }
  BigInt total = 0;
  BigInt first = 0;
  for (std::int64_t j = wb; j <= lb; ++j) {
    const BigInt c = binomial_big(static_cast<unsigned long>(lb), static_cast<unsigned long>(j));
    total += c;
    first += c * j;
  }
  SecOptimum out;
  out.omega_star = ratio_big(first, total * lb);
  out.sigma_star = log2_big(total) / static_cast<double>(lb);
  return out;
}

CapacityResult capacity_manhattan(std::int64_t q, double omega) {
  if (q < 2) throw Error(ErrorKind::BadParameters, "alphabet size q must be >= 2");
  const double top = static_cast<double>(q - 1);
  if (omega < -kEndpointTol || omega > top + kEndpointTol) {
    throw Error(ErrorKind::OutOfRange,
                "omega " + std::to_string(omega) + " outside [0, " + std::to_string(q - 1) + "]");
  }
  if (omega <= kEndpointTol || omega >= top - kEndpointTol) {
    return zero_capacity(RegionLocation::Corner);
  }
  std::vector<std::pair<std::int64_t, double>> weights;
  for (std::int64_t i = 0; i < q; ++i) weights.emplace_back(i, 0.0);
  const auto family = Tilted::from_log_weights(std::move(weights));
  const double t = family.solve_mean(omega);
  const auto m = family.moments(t);
  CapacityResult r;
  r.region = RegionLocation::Interior;
  r.sigma = (-omega * t + m.log_z) / kLn2;
  r.alpha = std::exp(t);
  r.log_term_coefficient = -0.5;
  return r;
}

double OptimalDistributions::entropy_rate() const {
  double h = first.entropy_bits();
  double len = first.mean;
  if (second) {
    h += second->entropy_bits();
    len += second->mean;
  }
  return h / len;
}

OptimalDistributions optimal_distributions(const RunSet& set, const DistributionConstraint& c) {
  if (std::holds_alternative<NoConstraint>(c)) {
    const auto r = capacity_star(set);
    return {*r.dist0, std::nullopt, r.bits()};
  }
  if (const auto* rc = std::get_if<RunsConstraint>(&c)) {
    const auto r = capacity_r(set, rc->rho);
    if (!r.dist0) throw Error(ErrorKind::OutOfRange, "rho at an end point has no run law");
    return {*r.dist0, std::nullopt, r.bits()};
  }
  return optimal_distributions(set, set, c);
}

OptimalDistributions optimal_distributions(const RunSet& zeros, const RunSet& ones,
                                           const DistributionConstraint& c) {
  CapacityResult r;
  if (std::holds_alternative<NoConstraint>(c)) {
    r = capacity_two_sets_star(zeros, ones);
  } else if (const auto* wc = std::get_if<WeightConstraint>(&c)) {
    r = capacity_two_sets_w(zeros, ones, wc->omega);
  } else if (const auto* rc = std::get_if<RunsConstraint>(&c)) {
    r = capacity_two_sets_r(zeros, ones, rc->rho);
  } else {
    r = capacity_two_sets(zeros, ones, std::get<WeightRunsConstraint>(c).point);
  }
  if (!r.dist0 || !r.dist1) {
    throw Error(ErrorKind::OutOfRange, "constraint at a region corner has no run laws");
  }
  return {*r.dist0, *r.dist1, r.bits()};
}

nlohmann::json sigma_to_json(const Sigma& s) {
  if (std::holds_alternative<NegativeInfinity>(s)) return "-inf";
  return std::get<double>(s);
}

nlohmann::json to_json(const RunDistribution& d) {
  nlohmann::json j;
  j["support"] = d.support;
  j["mean"] = d.mean;
  if (d.atom) {
    j["atom"] = *d.atom;
  } else {
    j["base"] = d.base;
    j["normalizer"] = d.normalizer;
  }
  j["entropy_bits"] = d.entropy_bits();
  return j;
}

nlohmann::json to_json(const CapacityResult& r) {
  nlohmann::json j;
  j["sigma"] = sigma_to_json(r.sigma);
  j["region"] = std::string(to_string(r.region));
  j["log_term_coefficient"] = r.log_term_coefficient;
  if (r.alpha) j["alpha"] = *r.alpha;
  if (r.beta) j["beta"] = *r.beta;
  if (r.lambda) j["lambda"] = *r.lambda;
  if (r.gamma) j["gamma"] = *r.gamma;
  if (r.dist0) j["dist0"] = to_json(*r.dist0);
  if (r.dist1) j["dist1"] = to_json(*r.dist1);
  j["near_corner"] = r.near_corner;
  return j;
}

}  // namespace csl
