#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "csl/constraints.hpp"

namespace csl {

/// Exact rational num/den with den > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  [[nodiscard]] double value() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

/// Parses "p/q" or an integer.
Rational parse_rational(const std::string& text);

struct TargetWR {
  Rational omega;
  Rational rho;
};
struct TargetW {
  Rational omega;
};
struct TargetR {
  Rational rho;
};
struct TargetTotal {};

/// Which count series is fitted: S_L(n, wn, rn), S_L(n, wn, *), S_L(n, *, rn) or S_L(n).
using FitTarget = std::variant<TargetWR, TargetW, TargetR, TargetTotal>;

std::string describe(const FitTarget& target);

struct FitPoint {
  std::int64_t n = 0;
  double log_count = 0.0;  // log2 of the exact count
  double n_term = 0.0;     // n * sigma
  double residual = 0.0;   // log_count - n_term - c log2 n - b
};

struct FitReport {
  std::vector<FitPoint> points;
  double sigma = 0.0;
  double fitted_log_coefficient = 0.0;
  double fitted_constant = 0.0;
  double max_residual = 0.0;
  /// False when the series has fewer than 4 points or spans less than a factor 8;
  /// the fit is still computed.
  bool well_spread = true;
};

/// Least-squares fit of log2 count - n sigma against c log2 n + b. Errors: EmptySeries
/// (fewer than two distinct n), BadParameters (wn or rn not integral), CapacityOutOfRange
/// (target outside the region), DomainError (a zero count).
FitReport fit_log_correction(const RunSet& set, const FitTarget& target,
                             std::vector<std::int64_t> n_list);

/// CSV with header n,log_count,n_term,residual.
std::string fit_to_csv(const FitReport& r);
nlohmann::json to_json(const FitReport& r);

struct ConvergenceRow {
  std::int64_t n = 0;
  double rate = 0.0;  // (1/n) log2 S_L(n)
  double gap = 0.0;   // |rate + log2 lambda|
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double capacity = 0.0;
  double max_gap_times_n = 0.0;
};

ConvergenceReport convergence_report(const RunSet& set, std::vector<std::int64_t> n_list);
nlohmann::json to_json(const ConvergenceReport& r);

}  // namespace csl
