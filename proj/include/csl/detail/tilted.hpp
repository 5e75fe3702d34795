#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "csl/constraints.hpp"
#include "csl/error.hpp"

namespace csl::detail {

/// Exponentially tilted family over an integer support: weights c_k x^k with
/// x = e^t. Every capacity root problem in the library is "find x such that the
/// tilted mean equals m" or "find x such that the partition function equals 1";
/// both are monotone in t, so they are solved in the log-parameter t with a
/// bracketed Newton iteration.
class Tilted {
 public:
  /// Unit weights on the elements of L (closed-form geometric tail when unbounded).
  static Tilted from_runset(const RunSet& set);
  /// Finite support points with natural-log weights.
  static Tilted from_log_weights(std::vector<std::pair<std::int64_t, double>> support);
  /// Family of the sum of two independent draws: its partition function is the
  /// product of the two partition functions.
  static Tilted product(const Tilted& a, const Tilted& b);

  struct Moments {
    double log_z = 0.0;  // natural log of sum c_k e^{tk}
    double mean = 0.0;
    double variance = 0.0;
  };

  [[nodiscard]] Moments moments(double t) const;

  [[nodiscard]] double min_point() const noexcept;
  /// +inf when any factor has a geometric tail.
  [[nodiscard]] double max_point() const noexcept;
  [[nodiscard]] bool has_tail() const noexcept;
  /// Upper end of the admissible t range (finite only for a tail).
  [[nodiscard]] double t_max() const noexcept;

  /// t such that the tilted mean equals `target`, which must lie strictly
  /// between min_point() and max_point().
  [[nodiscard]] double solve_mean(double target) const;

  /// t such that log_z(t) = 0; requires the partition function to cross 1.
  [[nodiscard]] double solve_unit_partition() const;

 private:
  struct Factor {
    bool tail = false;  // unit weights on lo, lo+1, ... (closed form)
    double lo = 0.0;
    std::vector<std::pair<double, double>> points;  // (k, ln c_k), ascending k
  };
  static Moments factor_moments(const Factor& f, double t);

  std::vector<Factor> factors_;
};

inline constexpr double kRootRelTol = 1e-13;
inline constexpr int kRootMaxIter = 200;
/// Upper bracket for x on unbounded run-length sets.
inline constexpr double kTailUpperX = 1.0 - 1e-12;

struct Eval {
  double value;
  double slope;
};

/// Safeguarded Newton for an increasing function with f(a) <= 0 <= f(b). The
/// end points are never evaluated, so an open bracket is fine. Falls back to
/// bisection whenever Newton leaves the bracket.
template <typename F>
double solve_increasing(F&& f, double a, double b, double accept_tol, const char* what) {
  double t = 0.5 * (a + b);
  for (int iter = 0; iter < kRootMaxIter; ++iter) {
    const Eval e = f(t);
    if (e.value == 0.0) return t;
    if (e.value < 0.0) {
      a = t;
    } else {
      b = t;
    }
    double next = t - e.value / e.slope;
    if (!std::isfinite(next) || next <= a || next >= b) next = 0.5 * (a + b);
    const double scale = std::max(1.0, std::abs(t));
    if (std::abs(next - t) <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
        (b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
      // Accept a residual within tolerance, or one explained by rounding of t itself.
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * scale;
      const Eval fin = f(next);
      if (std::abs(fin.value) <= std::max(accept_tol, std::abs(fin.slope) * slack)) return next;
      if (std::abs(e.value) <= std::max(accept_tol, std::abs(e.slope) * slack)) return t;
      break;
    }
    t = next;
  }
  throw Error(ErrorKind::ConvergenceFailure, std::string("root solve did not converge: ") + what);
}

}  // namespace csl::detail
