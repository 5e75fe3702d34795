#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csl/asymptotics.hpp"
#include "csl/capacity.hpp"
#include "csl/channel_bounds.hpp"
#include "csl/constraints.hpp"
#include "csl/counting.hpp"
#include "csl/error.hpp"
#include "csl/typicality.hpp"

namespace {

using csl::Error;
using csl::ErrorKind;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Output {
  std::string path;
  std::string format = "json";
  bool nats = false;

  void add(CLI::App* cmd, const char* default_format) {
    format = default_format;
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output,-o", path, "Write to this file instead of standard output");
    cmd->add_flag("--nats", nats, "Report logarithmic quantities in nats instead of bits");
  }

  [[nodiscard]] double scale() const { return nats ? std::numbers::ln2 : 1.0; }
  [[nodiscard]] const char* units() const { return nats ? "nats" : "bits"; }

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::BadParameters, "cannot open output file " + path);
    out << text;
  }
  void write(const json& j) const { write(j.dump(2) + "\n"); }
};

struct Grid {
  std::string name;
  std::vector<double> values;
};

/// "name=a:b:step", inclusive of b up to rounding.
Grid parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "grid needs name=a:b:step");
  Grid g;
  g.name = text.substr(0, eq);
  std::vector<double> parts;
  std::stringstream ss(text.substr(eq + 1));
  ss.imbue(std::locale::classic());
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw Error(ErrorKind::ParseError, "bad grid number '" + tok + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) throw Error(ErrorKind::ParseError, "grid needs name=a:b:step");
  const double a = parts[0];
  const double b = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || b < a) throw Error(ErrorKind::BadParameters, "grid needs step > 0 and b >= a");
  const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9)) + 1;
  for (std::int64_t i = 0; i < count; ++i) g.values.push_back(a + static_cast<double>(i) * step);
  return g;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::int64_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw Error(ErrorKind::ParseError, "not an integer: '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::optional<std::int64_t> parse_optional_bound(const std::string& text) {
  if (text == "inf") return std::nullopt;
  return parse_int_list(text).at(0);
}

// ---------------------------------------------------------------- count

struct CountArgs {
  std::string runset;
  std::string ones;
  std::int64_t n = 0;
  std::optional<std::int64_t> w;
  std::optional<std::int64_t> r;
  bool census = false;
  std::string method = "fast";
  std::optional<std::int64_t> sec_block;
  std::int64_t sec_min_weight = 0;
  std::optional<std::int64_t> manhattan_q;
  Output out;
};

int cmd_count(const CountArgs& a) {
  if (a.sec_block || a.manhattan_q) {
    if (!a.w) throw Error(ErrorKind::BadParameters, "--w is required for block and Manhattan counts");
    const auto value = a.sec_block ? csl::count_sec(*a.sec_block, a.sec_min_weight, a.n, *a.w)
                                   : csl::count_manhattan(*a.manhattan_q, a.n, *a.w);
    a.out.write(csl::to_decimal(value) + "\n");
    return kExitOk;
  }
  if (a.runset.empty()) throw Error(ErrorKind::BadParameters, "--runset is required");
  if (!a.ones.empty()) {
    const auto zeros = csl::make_part_set(csl::parse_runset_spec(a.runset));
    const auto ones = csl::make_part_set(csl::parse_runset_spec(a.ones));
    if (!a.w || !a.r) throw Error(ErrorKind::BadParameters, "two-set counts need --w and --r");
    a.out.write(csl::to_decimal(csl::count_two_sets(zeros, ones, a.n, *a.w, *a.r)) + "\n");
    return kExitOk;
  }
  const auto set = csl::parse_runset(a.runset);
  if (a.census) {
    csl::Census c;
    if (a.method == "cube") {
      c = csl::census(set, a.n);
    } else if (a.method == "oracle") {
      c = csl::oracle_census(set, a.n);
    } else {
      c = csl::census_fast(set, a.n);
    }
    if (a.out.format == "csv") {
      a.out.write(csl::census_to_csv(c));
    } else {
      a.out.write(csl::census_to_json(c));
    }
    return kExitOk;
  }
  csl::BigInt value;
  if (a.w && a.r) {
    value = csl::count_wr_fast(set, a.n, *a.w, *a.r);
  } else if (a.w) {
    value = csl::count_weight_marginal(set, a.n, *a.w);
  } else if (a.r) {
    value = csl::count_runs_marginal(set, a.n, *a.r);
  } else {
    value = csl::count_total(set, a.n);
  }
  a.out.write(csl::to_decimal(value) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- capacity

struct CapacityArgs {
  std::string runset;
  std::string ones;
  std::optional<double> omega;
  std::optional<double> rho;
  std::vector<std::string> sweep;
  std::optional<std::int64_t> sec_block;
  std::int64_t sec_min_weight = 0;
  std::optional<std::int64_t> manhattan_q;
  double tol = csl::kDefaultEdgeTolerance;
  Output out;
};

json capacity_json(const csl::CapacityResult& r, const Output& out) {
  json j = csl::to_json(r);
  if (!r.is_outside()) j["sigma"] = r.bits() * out.scale();
  j["units"] = out.units();
  return j;
}

std::string csv_optional(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

int capacity_sweep(const CapacityArgs& a) {
  std::optional<Grid> og;
  std::optional<Grid> rg;
  for (const auto& s : a.sweep) {
    auto g = parse_grid(s);
    if (g.name == "omega") {
      og = std::move(g);
    } else if (g.name == "rho") {
      rg = std::move(g);
    } else {
      throw Error(ErrorKind::ParseError, "sweep axis must be omega or rho, got " + g.name);
    }
  }
  if (!og || !rg) throw Error(ErrorKind::BadParameters, "--sweep needs omega=... and rho=...");
  const auto zeros = csl::parse_runset(a.runset);
  const auto ones = a.ones.empty() ? zeros : csl::parse_runset(a.ones);

  struct Row {
    double omega;
    double rho;
    csl::CapacityResult result;
  };
  std::vector<Row> rows;
  for (double w : og->values) {
    for (double r : rg->values) rows.push_back({w, r, {}});
  }
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(csl::default_threads(), rows.size()));
  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](unsigned worker) {
    try {
      for (std::size_t i = worker; i < rows.size(); i += threads) {
        auto& row = rows[i];
        // The sentinel marks outside points; two-set capacity would throw instead.
        row.result = a.ones.empty() ? csl::capacity_wr(zeros, {row.omega, row.rho}, a.tol)
                                    : [&] {
                                        try {
                                          return csl::capacity_two_sets(zeros, ones,
                                                                        {row.omega, row.rho}, a.tol);
                                        } catch (const Error& e) {
                                          if (e.kind() != ErrorKind::OutOfRange) throw;
                                          csl::CapacityResult out;
                                          out.sigma = csl::NegativeInfinity{};
                                          out.region = csl::RegionLocation::Outside;
                                          return out;
                                        }
                                      }();
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return std::tie(x.omega, x.rho) < std::tie(y.omega, y.rho);
  });

  if (a.out.format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json j = capacity_json(row.result, a.out);
      j["omega"] = row.omega;
      j["rho"] = row.rho;
      arr.push_back(j);
    }
    a.out.write(arr);
    return kExitOk;
  }
  std::ostringstream os;
  os << "omega,rho,region,sigma,alpha,beta,log_term_coefficient\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    os << fmt(row.omega) << ',' << fmt(row.rho) << ',' << csl::to_string(r.region) << ','
       << (r.is_outside() ? "-inf" : fmt(r.bits() * a.out.scale())) << ','
       << csv_optional(r.alpha) << ',' << csv_optional(r.beta) << ','
       << fmt(r.log_term_coefficient) << '\n';
  }
  a.out.write(os.str());
  return kExitOk;
}

int cmd_capacity(const CapacityArgs& a) {
  if (!a.sweep.empty()) return capacity_sweep(a);
  csl::CapacityResult r;
  json extra = json::object();
  if (a.sec_block) {
    if (!a.omega) throw Error(ErrorKind::BadParameters, "--omega is required with --sec-block");
    r = csl::capacity_sec(*a.sec_block, a.sec_min_weight, *a.omega);
    const auto opt = csl::sec_optimum(*a.sec_block, a.sec_min_weight);
    extra["omega_star"] = opt.omega_star;
    extra["sigma_star"] = opt.sigma_star * a.out.scale();
  } else if (a.manhattan_q) {
    if (!a.omega) throw Error(ErrorKind::BadParameters, "--omega is required with --manhattan-q");
    r = csl::capacity_manhattan(*a.manhattan_q, *a.omega);
  } else {
    if (a.runset.empty()) throw Error(ErrorKind::BadParameters, "--runset is required");
    if (!a.ones.empty()) {
      const auto zeros = csl::parse_runset(a.runset);
      const auto ones = csl::parse_runset(a.ones);
      if (a.omega && a.rho) {
        r = csl::capacity_two_sets(zeros, ones, {*a.omega, *a.rho}, a.tol);
      } else if (a.omega) {
        r = csl::capacity_two_sets_w(zeros, ones, *a.omega);
      } else if (a.rho) {
        r = csl::capacity_two_sets_r(zeros, ones, *a.rho);
      } else {
        r = csl::capacity_two_sets_star(zeros, ones);
      }
    } else {
      const auto set = csl::parse_runset(a.runset);
      if (a.omega && a.rho) {
        r = csl::capacity_wr(set, {*a.omega, *a.rho}, a.tol);
      } else if (a.omega) {
        r = csl::capacity_w(set, *a.omega);
        extra["rho_star_omega"] = csl::rho_star_omega(set, *a.omega);
      } else if (a.rho) {
        r = csl::capacity_r(set, *a.rho);
      } else {
        r = csl::capacity_star(set);
      }
    }
  }
  json j = capacity_json(r, a.out);
  j.update(extra);
  if (a.out.format == "csv") {
    std::ostringstream os;
    os << "omega,rho,region,sigma,alpha,beta,log_term_coefficient\n"
       << (a.omega ? fmt(*a.omega) : "") << ',' << (a.rho ? fmt(*a.rho) : "") << ','
       << csl::to_string(r.region) << ','
       << (r.is_outside() ? "-inf" : fmt(r.bits() * a.out.scale())) << ','
       << csv_optional(r.alpha) << ',' << csv_optional(r.beta) << ','
       << fmt(r.log_term_coefficient) << '\n';
    a.out.write(os.str());
  } else {
    a.out.write(j);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- typical

struct TypicalArgs {
  std::string runset;
  std::int64_t max_ell = 20;
  std::optional<std::int64_t> n;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> concentration_n;
  std::vector<double> window;
  std::string histogram_csv;
  Output out;
};

int cmd_typical(const TypicalArgs& a) {
  const auto set = csl::parse_runset(a.runset);
  const auto profile = csl::typical_profile(set);
  json j = csl::to_json(profile, a.max_ell);
  j["capacity"] = -std::log2(profile.lambda) * a.out.scale();
  j["units"] = a.out.units();
  if (a.concentration_n) {
    const std::int64_t n = *a.concentration_n;
    csl::ConcentrationWindow w = csl::default_window(n);
    if (a.window.size() == 2) {
      w = {a.window[0], a.window[1]};
    } else if (!a.window.empty()) {
      throw Error(ErrorKind::BadParameters, "--window takes two values");
    }
    const auto center = csl::typical_center(profile, n);
    j["concentration"] = {{"n", n},
                          {"dw", w.dw},
                          {"dr", w.dr},
                          {"center_w", center.first},
                          {"center_r", center.second},
                          {"mass", csl::concentration_mass(set, n, w)},
                          {"tail", csl::concentration_tail(set, n, w)}};
  }
  if (a.samples > 0) {
    if (!a.n) throw Error(ErrorKind::BadParameters, "--samples needs --n");
    const auto stats = csl::sample_sequences(set, *a.n, a.samples, a.seed);
    const auto gof = csl::chi_square_gof(stats, profile);
    j["samples"] = csl::to_json(stats);
    j["samples"]["chi_square"] = {{"statistic", gof.statistic},
                                  {"dof", gof.dof},
                                  {"p_value", gof.p_value},
                                  {"bins", gof.bins}};
    if (!a.histogram_csv.empty()) {
      std::ofstream f(a.histogram_csv);
      if (!f) throw Error(ErrorKind::BadParameters, "cannot open " + a.histogram_csv);
      f << csl::histogram_to_csv(stats, profile);
    }
  }
  a.out.write(j);
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string suite = "all";
  std::int64_t nmax = 12;
  Output out;
};

struct Failures {
  std::int64_t checks = 0;
  json list = json::array();
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) list.push_back(what);
  }
};

std::vector<csl::RunSet> small_runsets(std::int64_t max_element) {
  std::vector<csl::RunSet> out;
  for (std::uint32_t mask = 1; mask < (1U << max_element); ++mask) {
    std::vector<std::int64_t> elems;
    std::int64_t g = 0;
    for (std::int64_t e = 1; e <= max_element; ++e) {
      if (mask & (1U << (e - 1))) {
        elems.push_back(e);
        g = std::gcd(g, e);
      }
    }
    if (elems.size() >= 2 && g == 1) out.push_back(csl::make_runset(csl::ExplicitList{elems}));
  }
  return out;
}

void suite_oracle(std::int64_t nmax, Failures& f) {
  const std::int64_t top = std::min(nmax, csl::kMaxOracleLength);
  for (const auto& set : small_runsets(5)) {
    for (std::int64_t n = 0; n <= top; ++n) {
      const auto oracle = csl::oracle_census(set, n);
      const std::string tag = set.to_string() + " n=" + std::to_string(n);
      f.check(csl::census(set, n) == oracle, "census " + tag);
      f.check(csl::census_fast(set, n) == oracle, "census_fast " + tag);
      f.check(csl::count_total(set, n) == oracle.total, "count_total " + tag);
    }
  }
}

void suite_identities(std::int64_t nmax, Failures& f) {
  const std::vector<csl::RunSet> sets = {
      csl::naturals(), csl::make_runset(csl::ExplicitList{{1, 2}}),
      csl::make_runset(csl::ExplicitList{{1, 2, 3}}), csl::make_runset(csl::ExplicitList{{2, 3}}),
      csl::make_runset(csl::ExplicitList{{1, 3, 4}})};
  for (const auto& set : sets) {
    for (std::int64_t n = 1; n <= nmax; ++n) {
      const auto c = csl::census_fast(set, n);
      const std::string tag = set.to_string() + " n=" + std::to_string(n);
      for (const auto& [key, count] : c.table) {
        const auto [w, r] = key;
        f.check(c.at(n - w, r) == count, "complement " + tag);
        if (r % 2 == 0) {
          for (std::int64_t s : {1, 2}) {
            f.check(csl::count_wr_fast(set.shifted(s), n + s * r, w + s * r / 2, r) == count,
                    "shift " + tag);
          }
        }
      }
      for (std::int64_t r = 1; r <= n; ++r) {
        f.check(c.runs_marginal(r) == 2 * csl::compositions(set, n, r), "runs marginal " + tag);
      }
    }
  }
}

void suite_closed_form(Failures& f) {
  const auto nat = csl::naturals();
  for (int i = 1; i < 50; ++i) {
    for (int k = 1; k < 50; ++k) {
      const double w = i / 50.0;
      const double r = 2.0 * std::min(w, 1.0 - w) * k / 50.0;
      const double expect =
          (1 - w) * csl::binary_entropy(r / (2 * (1 - w))) + w * csl::binary_entropy(r / (2 * w));
      f.check(std::abs(csl::capacity_wr(nat, {w, r}).bits() - expect) <= 1e-9,
              "capacity_wr(N) at " + fmt(w) + "," + fmt(r));
    }
    const double w = i / 50.0;
    f.check(std::abs(csl::capacity_w(nat, w).bits() - csl::binary_entropy(w)) <= 1e-9,
            "capacity_w(N) at " + fmt(w));
  }
  for (std::int64_t d = 1; d <= 3; ++d) {
    for (int i = 1; i < 50; ++i) {
      const double rho = i / 50.0 / static_cast<double>(d + 1);
      const double free = 1.0 - static_cast<double>(d) * rho;
      f.check(std::abs(csl::capacity_r(csl::interval_from(d + 1), rho).bits() -
                       free * csl::binary_entropy(rho / free)) <= 1e-9,
              "capacity_r(N+" + std::to_string(d) + ") at " + fmt(rho));
    }
  }
}

void suite_fit(Failures& f, json& details) {
  using csl::Rational;
  const std::vector<std::int64_t> ns = {100, 200, 400, 800};
  const Rational half{1, 2};
  auto run = [&](const csl::RunSet& set, const csl::FitTarget& t, double lo, double hi) {
    const auto rep = csl::fit_log_correction(set, t, ns);
    const std::string tag = set.to_string() + " " + csl::describe(t);
    details[tag] = rep.fitted_log_coefficient;
    f.check(rep.fitted_log_coefficient >= lo && rep.fitted_log_coefficient <= hi, "fit " + tag);
  };
  const auto nat = csl::naturals();
  const auto l12 = csl::make_runset(csl::ExplicitList{{1, 2}});
  run(nat, csl::TargetWR{half, half}, -1.25, -0.75);
  run(l12, csl::TargetWR{half, {4, 5}}, -1.25, -0.75);
  run(nat, csl::TargetW{half}, -0.75, -0.25);
  run(l12, csl::TargetW{half}, -0.75, -0.25);
  run(nat, csl::TargetR{half}, -0.75, -0.25);
  run(l12, csl::TargetR{{18, 25}}, -0.75, -0.25);
}

int cmd_validate(const ValidateArgs& a) {
  Failures f;
  json details = json::object();
  const bool all = a.suite == "all";
  if (all || a.suite == "oracle") suite_oracle(a.nmax, f);
  if (all || a.suite == "identities") suite_identities(a.nmax, f);
  if (all || a.suite == "closed-form") suite_closed_form(f);
  if (all || a.suite == "fit") suite_fit(f, details);
  json j;
  j["suite"] = a.suite;
  j["nmax"] = a.nmax;
  j["checks"] = f.checks;
  j["failures"] = f.list;
  if (!details.empty()) j["fitted_coefficients"] = details;
  j["passed"] = f.list.empty();
  a.out.write(j);
  return f.list.empty() ? kExitOk : kExitComputation;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::int64_t d = 0;
  std::string k = "inf";
  std::int64_t n = 100;
  std::int64_t t = 1;
  std::int64_t q = 2;
  double rho = 0.0;
  Output out;
};

json bound_json(const csl::BoundReport& r, const Output& out) {
  json j = csl::to_json(r);
  if (out.nats) {
    j.erase("log2_lower");
    j.erase("log2_upper");
    j["ln_lower"] = r.log2_lower * out.scale();
    j["ln_upper"] = r.log2_upper * out.scale();
    if (r.log2_exact_asymptotic) {
      j.erase("log2_exact_asymptotic");
      j["ln_exact_asymptotic"] = *r.log2_exact_asymptotic * out.scale();
    }
  }
  return j;
}

int cmd_bounds_deletion(const BoundsArgs& a) {
  a.out.write(bound_json(csl::deletion_bounds(a.d, parse_optional_bound(a.k), a.n, a.t), a.out));
  return kExitOk;
}

int cmd_bounds_timing(const BoundsArgs& a) {
  a.out.write(bound_json(csl::timing_bounds(a.q, a.n, a.t), a.out));
  return kExitOk;
}

int cmd_bounds_volume(const BoundsArgs& a, bool with_finite_n) {
  json j;
  j["d"] = a.d;
  j["rho"] = a.rho;
  j["lambda"] = csl::volume_lambda(a.d);
  j["breakpoint"] = csl::volume_breakpoint(a.d);
  j["volume_exponent"] = csl::volume_exponent(a.d, a.rho) * a.out.scale();
  j["sphere_packing_rate"] = csl::sphere_packing_rate(a.d, a.rho) * a.out.scale();
  if (with_finite_n) {
    j["n"] = a.n;
    j["volume_finite_n"] = csl::volume_finite_n(a.d, a.rho, a.n) * a.out.scale();
  }
  j["units"] = a.out.units();
  a.out.write(j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting, capacities and bounds for runlength-limited sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "csl 1.0.0");

  CountArgs count;
  auto* c = app.add_subcommand("count", "Exact counts and censuses");
  c->add_option("--runset", count.runset, "Run-length set: 1,2,5 or interval:lo:hi|inf");
  c->add_option("--ones", count.ones, "Separate set for runs of ones (--runset then constrains zeros)");
  c->add_option("--n", count.n, "Sequence length")->required()->check(CLI::NonNegativeNumber);
  c->add_option("--w", count.w, "Weight");
  c->add_option("--r", count.r, "Number of runs");
  c->add_flag("--census", count.census, "Emit the full (w, r) table");
  c->add_option("--method", count.method, "Census method")
      ->check(CLI::IsMember({"fast", "cube", "oracle"}));
  c->add_option("--sec-block", count.sec_block, "Block length of the block-weight constraint");
  c->add_option("--sec-min-weight", count.sec_min_weight, "Minimum weight per block");
  c->add_option("--manhattan-q", count.manhattan_q, "Alphabet size for coordinate-sum counts");
  count.out.add(c, "csv");

  CapacityArgs cap;
  auto* k = app.add_subcommand("capacity", "Capacity functions and region sweeps");
  k->add_option("--runset", cap.runset, "Run-length set");
  k->add_option("--ones", cap.ones, "Separate set for runs of ones");
  k->add_option("--omega", cap.omega, "Relative weight");
  k->add_option("--rho", cap.rho, "Relative number of runs");
  k->add_option("--sweep", cap.sweep, "Grid axes omega=a:b:step rho=a:b:step")->expected(2);
  k->add_option("--tol", cap.tol, "Edge classification tolerance");
  k->add_option("--sec-block", cap.sec_block, "Block length of the block-weight constraint");
  k->add_option("--sec-min-weight", cap.sec_min_weight, "Minimum weight per block");
  k->add_option("--manhattan-q", cap.manhattan_q, "Alphabet size for the coordinate-sum rate");
  cap.out.add(k, "json");

  TypicalArgs typ;
  auto* t = app.add_subcommand("typical", "Typical parameters, concentration and sampling");
  t->add_option("--runset", typ.runset, "Run-length set")->required();
  t->add_option("--max-ell", typ.max_ell, "Largest run length listed in beta_star");
  t->add_option("--n", typ.n, "Sample length");
  t->add_option("--samples", typ.samples, "Number of sampled sequences");
  t->add_option("--seed", typ.seed, "Sampler seed");
  t->add_option("--concentration", typ.concentration_n, "Exact concentration mass at this n");
  t->add_option("--window", typ.window, "Window half-widths dw dr (default n^{3/4} each)")
      ->expected(2);
  t->add_option("--histogram-csv", typ.histogram_csv, "Write the sampled run histogram here");
  typ.out.add(t, "json");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Run an internal consistency suite");
  v->add_option("--suite", val.suite, "Suite name")
      ->check(CLI::IsMember({"oracle", "identities", "fit", "closed-form", "all"}));
  v->add_option("--nmax", val.nmax, "Largest length checked")->check(CLI::NonNegativeNumber);
  val.out.add(v, "json");

  BoundsArgs bnd;
  auto* b = app.add_subcommand("bounds", "Code-size bounds");
  b->require_subcommand(1);
  auto* bd = b->add_subcommand("deletion", "Deletion-correcting (d, k) codes");
  bd->add_option("--d", bnd.d, "Minimum zeros between ones")->required();
  bd->add_option("--k", bnd.k, "Maximum zeros between ones, or inf");
  bd->add_option("--n", bnd.n, "Length")->required();
  bd->add_option("--t", bnd.t, "Deletions corrected");
  bnd.out.add(bd, "json");
  auto* bv = b->add_subcommand("volume", "Error-pattern volume exponent and sphere packing rate");
  bv->add_option("--d", bnd.d, "Constraint parameter")->required();
  bv->add_option("--rho", bnd.rho, "Relative number of runs")->required();
  auto* bv_n = bv->add_option("--n", bnd.n, "Also report the exact finite-n exponent");
  bv->add_flag("--nats", bnd.out.nats, "Report in nats");
  bv->add_option("--output,-o", bnd.out.path, "Output file");
  auto* bt = b->add_subcommand("timing", "Timing-error-correcting codes");
  bt->add_option("--q", bnd.q, "Alphabet size")->required();
  bt->add_option("--n", bnd.n, "Length")->required();
  bt->add_option("--t", bnd.t, "Timing errors corrected");
  bt->add_flag("--nats", bnd.out.nats, "Report in nats");
  bt->add_option("--output,-o", bnd.out.path, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_count(count);
    if (k->parsed()) return cmd_capacity(cap);
    if (t->parsed()) return cmd_typical(typ);
    if (v->parsed()) return cmd_validate(val);
    if (bd->parsed()) return cmd_bounds_deletion(bnd);
    if (bv->parsed()) return cmd_bounds_volume(bnd, bv_n->count() > 0);
    if (bt->parsed()) return cmd_bounds_timing(bnd);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_usage_error() ? kExitUsage : kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}
