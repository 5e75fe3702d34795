#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace csl {

/// Explicit list of allowed run lengths, e.g. {1, 3, 4}.
struct ExplicitList {
  std::vector<std::int64_t> elements;
};

/// Contiguous run lengths lo, lo+1, ..., hi; `hi == nullopt` means no upper bound.
struct IntervalSpec {
  std::int64_t lo = 1;
  std::optional<std::int64_t> hi;
};

using RunSetSpec = std::variant<ExplicitList, IntervalSpec>;

/// The set L of allowed run lengths.
///
/// Instances built with make_runset() satisfy |L| >= 2 and gcd L = 1; the
/// relaxed make_part_set() only requires a non-empty set of positive integers
/// and exists for counting with independent zero/one constraints, where
/// singletons such as {2} are meaningful.
class RunSet {
 public:
  enum class Kind { Finite, Interval };

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] std::int64_t lmin() const noexcept { return lmin_; }
  /// nullopt when the set is unbounded above.
  [[nodiscard]] std::optional<std::int64_t> lmax() const noexcept { return lmax_; }
  [[nodiscard]] bool bounded() const noexcept { return lmax_.has_value(); }
  /// lmax as a double, +inf when unbounded.
  [[nodiscard]] double lmax_real() const noexcept;

  /// Sorted elements of a Finite set; empty for Interval.
  [[nodiscard]] const std::vector<std::int64_t>& explicit_elements() const noexcept {
    return elements_;
  }

  [[nodiscard]] bool contains(std::int64_t ell) const noexcept;

  /// All elements <= cap, ascending. Unbounded sets are cut at `cap`.
  [[nodiscard]] std::vector<std::int64_t> elements_upto(std::int64_t cap) const;

  /// All elements of a bounded set. Throws DomainError when unbounded.
  [[nodiscard]] std::vector<std::int64_t> elements() const;

  /// Number of elements, nullopt when infinite.
  [[nodiscard]] std::optional<std::int64_t> cardinality() const noexcept;

  /// True when |L| >= 2 and gcd L = 1, i.e. the set is valid for capacity solvers.
  [[nodiscard]] bool admissible() const noexcept { return admissible_; }

  /// L + s = { l + s : l in L }. Throws NonPositiveElement if an element drops below 1.
  [[nodiscard]] RunSet shifted(std::int64_t s) const;

  /// Command-line grammar: "1,2,5" or "interval:lo:hi" (hi may be "inf").
  [[nodiscard]] std::string to_string() const;

  /// Same set of integers (a finite Interval equals the matching Finite list).
  friend bool operator==(const RunSet& a, const RunSet& b);

 private:
  friend RunSet make_runset(const RunSetSpec& spec);
  friend RunSet make_part_set(const RunSetSpec& spec);
  static RunSet build(const RunSetSpec& spec, bool strict);

  Kind kind_ = Kind::Finite;
  std::vector<std::int64_t> elements_;
  std::int64_t lmin_ = 1;
  std::optional<std::int64_t> lmax_;
  bool admissible_ = false;
};

/// Validated run-length set: errors EmptySet, SingletonSet, NonCoprime, NonPositiveElement.
RunSet make_runset(const RunSetSpec& spec);
/// Relaxed set of positive parts (non-empty, positive); may be a singleton or have gcd > 1.
RunSet make_part_set(const RunSetSpec& spec);

/// The unconstrained set N = {1, 2, ...}.
RunSet naturals();
/// {lo, lo+1, ...}; interval_from(d + 1) is the (d, inf) constraint.
RunSet interval_from(std::int64_t lo);
/// {d+1, ..., k+1}, with k == nullopt meaning unbounded.
RunSet dk_runset(std::int64_t d, std::optional<std::int64_t> k);

/// Parses the command-line grammar without validating; pass the result to make_runset.
RunSetSpec parse_runset_spec(std::string_view text);
RunSet parse_runset(std::string_view text);

void to_json(nlohmann::json& j, const RunSet& set);
RunSet runset_from_json(const nlohmann::json& j);

/// A(x) = sum x^l, A1(x) = sum l x^l, A2(x) = sum l^2 x^l over l in L.
struct PowerSums {
  double a = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

/// Exact term-by-term sums for bounded sets, closed-form geometric tails otherwise.
/// Requires x > 0, and x < 1 when L is unbounded (DomainError otherwise).
PowerSums power_sums(const RunSet& set, double x);

/// Relative Hamming weight omega and relative number of runs rho.
struct ParamPoint {
  double omega = 0.0;
  double rho = 0.0;
};

enum class RegionLocation {
  Interior,
  EdgeUpperLeft,   // rho = 2 omega / lmin
  EdgeUpperRight,  // rho = 2 (1 - omega) / lmin
  EdgeLowerLeft,   // rho = 2 (1 - omega) / lmax
  EdgeLowerRight,  // rho = 2 omega / lmax
  Corner,
  Outside,
};

std::string_view to_string(RegionLocation loc);
RegionLocation region_from_string(std::string_view name);

inline constexpr double kDefaultEdgeTolerance = 1e-9;

/// Slack of each of the four inequalities describing the admissible (omega, rho)
/// region, measured in units of rho. Zero means the constraint is active,
/// negative means it is violated. For unbounded lmax both lower slacks equal rho.
struct RegionSlacks {
  double upper_left = 0.0;
  double upper_right = 0.0;
  double lower_left = 0.0;
  double lower_right = 0.0;
};

/// Region for independent zero-run constraint `zeros` and one-run constraint `ones`.
RegionSlacks region_slacks(const RunSet& zeros, const RunSet& ones, ParamPoint p);

RegionLocation classify(const RunSet& set, ParamPoint p, double tol = kDefaultEdgeTolerance);
RegionLocation classify(const RunSet& zeros, const RunSet& ones, ParamPoint p,
                        double tol = kDefaultEdgeTolerance);

/// The corner points of the region of a single run-length set (three or four,
/// depending on whether lmax is finite).
std::vector<ParamPoint> region_corners(const RunSet& set);

}  // namespace csl
