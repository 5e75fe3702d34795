#include "csl/detail/tilted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csl/error.hpp"

namespace csl::detail {

Tilted Tilted::from_runset(const RunSet& set) {
  Factor f;
  f.lo = static_cast<double>(set.lmin());
  if (!set.bounded()) {
    f.tail = true;
  } else {
    for (auto ell : set.elements()) f.points.emplace_back(static_cast<double>(ell), 0.0);
  }
  Tilted out;
  out.factors_.push_back(std::move(f));
  return out;
}

Tilted Tilted::from_log_weights(std::vector<std::pair<std::int64_t, double>> support) {
  if (support.empty()) throw Error(ErrorKind::EmptySet, "tilted family needs support");
  std::sort(support.begin(), support.end());
  Factor f;
  for (const auto& [k, lw] : support) f.points.emplace_back(static_cast<double>(k), lw);
  f.lo = f.points.front().first;
  Tilted out;
  out.factors_.push_back(std::move(f));
  return out;
}

Tilted Tilted::product(const Tilted& a, const Tilted& b) {
  Tilted out = a;
  out.factors_.insert(out.factors_.end(), b.factors_.begin(), b.factors_.end());
  return out;
}

double Tilted::min_point() const noexcept {
  double s = 0.0;
  for (const auto& f : factors_) s += f.lo;
  return s;
}

double Tilted::max_point() const noexcept {
  double s = 0.0;
  for (const auto& f : factors_) {
    if (f.tail) return std::numeric_limits<double>::infinity();
    s += f.points.back().first;
  }
  return s;
}

bool Tilted::has_tail() const noexcept {
  return std::any_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.tail; });
}

double Tilted::t_max() const noexcept {
  return has_tail() ? std::log(kTailUpperX) : std::numeric_limits<double>::infinity();
}

Tilted::Moments Tilted::factor_moments(const Factor& f, double t) {
  Moments m;
  if (f.tail) {
    // x = e^t < 1: sum_{k>=lo} x^k = x^lo / (1 - x).
    const double one_minus_x = -std::expm1(t);
    const double odds = 1.0 / std::expm1(-t);  // x / (1 - x)
    m.log_z = f.lo * t - std::log(one_minus_x);
    m.mean = f.lo + odds;
    m.variance = odds / one_minus_x;
    return m;
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& [k, lw] : f.points) peak = std::max(peak, k * t + lw);
  double z = 0.0;
  double first = 0.0;
  for (const auto& [k, lw] : f.points) {
    const double e = std::exp(k * t + lw - peak);
    z += e;
    first += k * e;
  }
  m.mean = first / z;
  double second = 0.0;
  for (const auto& [k, lw] : f.points) {
    const double d = k - m.mean;
    second += d * d * std::exp(k * t + lw - peak);
  }
  m.variance = second / z;
  m.log_z = peak + std::log(z);
  return m;
}

Tilted::Moments Tilted::moments(double t) const {
  Moments m;
  for (const auto& f : factors_) {
    const auto fm = factor_moments(f, t);
    m.log_z += fm.log_z;
    m.mean += fm.mean;
    m.variance += fm.variance;
  }
  return m;
}

double Tilted::solve_mean(double target) const {
  if (!(target > min_point() && target < max_point())) {
    throw Error(ErrorKind::OutOfRange, "tilted mean " + std::to_string(target) +
                                           " outside the open support range");
  }
  auto f = [&](double t) {
    const auto m = moments(t);
    return Eval{m.mean - target, m.variance};
  };
  const bool tail = has_tail();
  double hi = tail ? t_max() : 1.0;
  if (tail) {
    if (f(hi).value < 0.0) {
      throw Error(ErrorKind::ConvergenceFailure,
                  "tilted mean " + std::to_string(target) + " beyond the tail bracket");
    }
  } else {
    int guard = 0;
    while (f(hi).value < 0.0) {
      hi *= 2.0;
      if (++guard > 60) throw Error(ErrorKind::ConvergenceFailure, "no upper bracket");
    }
  }
  double lo = -1.0;
  int guard = 0;
  while (f(lo).value > 0.0) {
    lo *= 2.0;
    if (++guard > 60) throw Error(ErrorKind::ConvergenceFailure, "no lower bracket");
  }
  return solve_increasing(f, lo, hi, kRootRelTol * std::max(1.0, std::abs(target)),
                          "tilted mean");
}

double Tilted::solve_unit_partition() const {
  auto f = [&](double t) {
    const auto m = moments(t);
    return Eval{m.log_z, m.mean};
  };
  const bool tail = has_tail();
  double hi = tail ? t_max() : 0.0;
  int guard = 0;
  while (f(hi).value < 0.0) {
    if (tail) throw Error(ErrorKind::ConvergenceFailure, "partition below 1 at tail bracket");
    hi = hi == 0.0 ? 1.0 : 2.0 * hi;
    if (++guard > 60) throw Error(ErrorKind::ConvergenceFailure, "no upper bracket");
  }
  double lo = -1.0;
  guard = 0;
  while (f(lo).value > 0.0) {
    lo *= 2.0;
    if (++guard > 60) throw Error(ErrorKind::ConvergenceFailure, "no lower bracket");
  }
  return solve_increasing(f, lo, hi, kRootRelTol, "unit partition");
}

}  // namespace csl::detail
