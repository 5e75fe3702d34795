#include "csl/asymptotics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "csl/bigint.hpp"
#include "csl/capacity.hpp"
#include "csl/counting.hpp"
#include "csl/error.hpp"

namespace csl {

namespace {

std::int64_t scaled(Rational q, std::int64_t n, const char* what) {
  if ((q.num * n) % q.den != 0) {
    throw Error(ErrorKind::BadParameters, std::string(what) + " * n is not an integer for n = " +
                                              std::to_string(n));
  }
  return q.num * n / q.den;
}

double target_sigma(const RunSet& set, const FitTarget& target) {
  if (const auto* t = std::get_if<TargetWR>(&target)) {
    const auto r = capacity_wr(set, {t->omega.value(), t->rho.value()});
    return r.bits();
  }
  try {
    if (const auto* t = std::get_if<TargetW>(&target)) return capacity_w(set, t->omega.value()).bits();
    if (const auto* t = std::get_if<TargetR>(&target)) return capacity_r(set, t->rho.value()).bits();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::OutOfRange) throw Error(ErrorKind::CapacityOutOfRange, e.what());
    throw;
  }
  return capacity_star(set).bits();
}

BigInt target_count(const RunSet& set, const FitTarget& target, std::int64_t n) {
  if (const auto* t = std::get_if<TargetWR>(&target)) {
    return count_wr_fast(set, n, scaled(t->omega, n, "omega"), scaled(t->rho, n, "rho"));
  }
  if (const auto* t = std::get_if<TargetW>(&target)) {
    return count_weight_marginal(set, n, scaled(t->omega, n, "omega"));
  }
  if (const auto* t = std::get_if<TargetR>(&target)) {
    return count_runs_marginal(set, n, scaled(t->rho, n, "rho"));
  }
  return count_total(set, n);
}

std::vector<std::int64_t> normalized(std::vector<std::int64_t> n_list) {
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  for (auto n : n_list) {
    if (n < 1) throw Error(ErrorKind::BadParameters, "series lengths must be >= 1");
  }
  return n_list;
}

std::string rational_string(Rational q) {
  return std::to_string(q.num) + "/" + std::to_string(q.den);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto read = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorKind::ParseError, "not a rational: '" + text + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  Rational q;
  if (slash == std::string::npos) {
    q.num = read(text);
    return q;
  }
  q.num = read(std::string_view(text).substr(0, slash));
  q.den = read(std::string_view(text).substr(slash + 1));
  if (q.den <= 0) throw Error(ErrorKind::ParseError, "rational denominator must be positive");
  return q;
}

std::string describe(const FitTarget& target) {
  if (const auto* t = std::get_if<TargetWR>(&target)) {
    return "wr(" + rational_string(t->omega) + "," + rational_string(t->rho) + ")";
  }
  if (const auto* t = std::get_if<TargetW>(&target)) return "w(" + rational_string(t->omega) + ")";
  if (const auto* t = std::get_if<TargetR>(&target)) return "r(" + rational_string(t->rho) + ")";
  return "total";
}

FitReport fit_log_correction(const RunSet& set, const FitTarget& target,
                             std::vector<std::int64_t> n_list) {
  n_list = normalized(std::move(n_list));
  if (n_list.size() < 2) {
    throw Error(ErrorKind::EmptySeries, "a log-correction fit needs at least two distinct n");
  }
  FitReport report;
  report.sigma = target_sigma(set, target);
  report.well_spread = n_list.size() >= 4 && n_list.back() >= 8 * n_list.front();

  for (auto n : n_list) {
    const BigInt count = target_count(set, target, n);
    if (sgn(count) == 0) {
      throw Error(ErrorKind::DomainError, "zero count at n = " + std::to_string(n));
    }
    FitPoint p;
    p.n = n;
    p.log_count = log2_big(count);
    p.n_term = static_cast<double>(n) * report.sigma;
    report.points.push_back(p);
  }

  const double k = static_cast<double>(report.points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : report.points) {
    mx += std::log2(static_cast<double>(p.n));
    my += p.log_count - p.n_term;
  }
  mx /= k;
  my /= k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : report.points) {
    const double dx = std::log2(static_cast<double>(p.n)) - mx;
    sxy += dx * (p.log_count - p.n_term - my);
    sxx += dx * dx;
  }
  report.fitted_log_coefficient = sxy / sxx;
  report.fitted_constant = my - report.fitted_log_coefficient * mx;
  for (auto& p : report.points) {
    p.residual = p.log_count - p.n_term -
                 report.fitted_log_coefficient * std::log2(static_cast<double>(p.n)) -
                 report.fitted_constant;
    report.max_residual = std::max(report.max_residual, std::abs(p.residual));
  }
  return report;
}

std::string fit_to_csv(const FitReport& r) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "n,log_count,n_term,residual\n";
  for (const auto& p : r.points) {
    os << p.n << ',' << p.log_count << ',' << p.n_term << ',' << p.residual << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const FitReport& r) {
  nlohmann::json j;
  j["sigma"] = r.sigma;
  j["fitted_log_coefficient"] = r.fitted_log_coefficient;
  j["fitted_constant"] = r.fitted_constant;
  j["max_residual"] = r.max_residual;
  j["well_spread"] = r.well_spread;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"n", p.n}, {"log_count", p.log_count}, {"n_term", p.n_term},
                   {"residual", p.residual}});
  }
  j["points"] = pts;
  return j;
}

ConvergenceReport convergence_report(const RunSet& set, std::vector<std::int64_t> n_list) {
  n_list = normalized(std::move(n_list));
  if (n_list.empty()) throw Error(ErrorKind::EmptySeries, "convergence report needs some n");
  ConvergenceReport report;
  report.capacity = -std::log2(solve_lambda(set));
  for (auto n : n_list) {
    ConvergenceRow row;
    row.n = n;
    row.rate = log2_big(count_total(set, n)) / static_cast<double>(n);
    row.gap = std::abs(row.rate - report.capacity);
    report.max_gap_times_n = std::max(report.max_gap_times_n, row.gap * static_cast<double>(n));
    report.rows.push_back(row);
  }
  return report;
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["capacity"] = r.capacity;
  j["max_gap_times_n"] = r.max_gap_times_n;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"rate", row.rate}, {"gap", row.gap}});
  j["rows"] = rows;
  return j;
}

}  // namespace csl
