#include "csl/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "csl/bigint.hpp"
#include "csl/counting.hpp"
#include "csl/error.hpp"

namespace csl {

namespace {

BigInt window_sum(const Census& c, std::pair<std::int64_t, std::int64_t> center,
                  ConcentrationWindow window, bool inside) {
  const double radius = window.dw + window.dr + 1e-9;
  BigInt sum = 0;
  for (const auto& [key, count] : c.table) {
    const auto dist = std::abs(key.first - center.first) + std::abs(key.second - center.second);
    if ((static_cast<double>(dist) <= radius) == inside) sum += count;
  }
  return sum;
}

/// Inverse-CDF draws from P(l) = lambda^l; written out so streams are identical
/// across standard libraries.
class RunDrawer {
 public:
  RunDrawer(const RunSet& set, double lambda) : lo_(set.lmin()), log_lambda_(std::log(lambda)) {
    if (set.bounded()) {
      double acc = 0.0;
      for (auto ell : set.elements()) {
        acc += std::pow(lambda, static_cast<double>(ell));
        cdf_.emplace_back(ell, acc);
      }
      for (auto& entry : cdf_) entry.second /= acc;
      cdf_.back().second = 1.0;
    }
  }

  std::int64_t operator()(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    if (cdf_.empty()) {
      // P(l >= lo + k) = lambda^k.
      return lo_ + static_cast<std::int64_t>(std::floor(std::log1p(-u) / log_lambda_));
    }
    for (const auto& [ell, c] : cdf_) {
      if (u < c) return ell;
    }
    return cdf_.back().first;
  }

 private:
  std::int64_t lo_;
  double log_lambda_;
  std::vector<std::pair<std::int64_t, double>> cdf_;
};

struct Partial {
  std::int64_t weight = 0;
  std::int64_t runs = 0;
  std::int64_t rejections = 0;
  std::map<std::int64_t, std::int64_t> hist;
  std::map<std::int64_t, std::int64_t> hist_sq;

  void merge(const Partial& o) {
    weight += o.weight;
    runs += o.runs;
    rejections += o.rejections;
    for (const auto& [k, v] : o.hist) hist[k] += v;
    for (const auto& [k, v] : o.hist_sq) hist_sq[k] += v;
  }
};

void draw_one(const RunSet& set, const RunDrawer& draw, std::int64_t n, std::uint64_t seed,
              std::uint64_t index, Partial& out) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::map<std::int64_t, std::int64_t> local;
  for (std::int64_t attempt = 0; attempt <= kMaxSamplerRejections; ++attempt) {
    local.clear();
    int symbol = static_cast<int>(rng() & 1U);
    std::int64_t len = 0;
    std::int64_t weight = 0;
    std::int64_t runs = 0;
    bool ok = true;
    while (len < n) {
      std::int64_t ell = draw(rng);
      if (len + ell > n) {
        ell = n - len;
        if (!set.contains(ell)) {
          ok = false;
          break;
        }
      }
      len += ell;
      weight += symbol * ell;
      ++runs;
      ++local[ell];
      symbol ^= 1;
    }
    if (!ok) {
      ++out.rejections;
      continue;
    }
    out.weight += weight;
    out.runs += runs;
    for (const auto& [k, v] : local) {
      out.hist[k] += v;
      out.hist_sq[k] += v * v;
    }
    return;
  }
  throw Error(ErrorKind::SamplerStuck, "sample " + std::to_string(index) + " rejected " +
                                           std::to_string(kMaxSamplerRejections) + " times");
}

}  // namespace

double TypicalProfile::beta_star(std::int64_t ell) const {
  if (!set.contains(ell)) return 0.0;
  return std::pow(lambda, static_cast<double>(ell)) * rho_star;
}

double TypicalProfile::pair_freq(std::int64_t ell, std::int64_t ell_next) const {
  if (!set.contains(ell) || !set.contains(ell_next)) return 0.0;
  return std::pow(lambda, static_cast<double>(ell + ell_next)) * rho_star;
}

double TypicalProfile::tail_run_freq(std::int64_t min_len) const {
  const std::int64_t from = std::max(min_len, set.lmin());
  double sum = 0.0;
  if (set.bounded()) {
    for (auto ell : set.elements()) {
      if (ell >= from) sum += std::pow(lambda, static_cast<double>(ell));
    }
  } else {
    sum = std::pow(lambda, static_cast<double>(from)) / (1.0 - lambda);
  }
  return 0.5 * sum * rho_star;
}

TypicalProfile typical_profile(const RunSet& set) {
  TypicalProfile p;
  p.set = set;
  const auto star = capacity_star(set);
  p.lambda = *star.lambda;
  p.run_dist = *star.dist0;
  p.rho_star = 1.0 / p.run_dist.mean;
  return p;
}

nlohmann::json to_json(const TypicalProfile& p, std::int64_t max_ell) {
  nlohmann::json j;
  j["runset"] = p.set;
  j["omega_star"] = p.omega_star;
  j["rho_star"] = p.rho_star;
  j["lambda"] = p.lambda;
  j["capacity"] = -std::log2(p.lambda);
  nlohmann::json beta = nlohmann::json::object();
  for (auto ell : p.set.elements_upto(max_ell)) beta[std::to_string(ell)] = p.beta_star(ell);
  j["beta_star"] = beta;
  j["run_dist"] = to_json(p.run_dist);
  return j;
}

ConcentrationWindow default_window(std::int64_t n) {
  const double h = std::pow(static_cast<double>(n), 0.75);
  return {h, h};
}

std::pair<std::int64_t, std::int64_t> typical_center(const TypicalProfile& p, std::int64_t n) {
  const double nn = static_cast<double>(n);
  return {static_cast<std::int64_t>(std::floor(p.omega_star * nn)),
          static_cast<std::int64_t>(std::floor(p.rho_star * nn))};
}

double concentration_mass(const RunSet& set, std::int64_t n, ConcentrationWindow window) {
  const auto c = census_fast(set, n);
  if (sgn(c.total) == 0) return 0.0;
  const auto center = typical_center(typical_profile(set), n);
  return ratio_big(window_sum(c, center, window, true), c.total);
}

double concentration_tail(const RunSet& set, std::int64_t n, ConcentrationWindow window) {
  const auto c = census_fast(set, n);
  if (sgn(c.total) == 0) return 0.0;
  const auto center = typical_center(typical_profile(set), n);
  return ratio_big(window_sum(c, center, window, false), c.total);
}

double SampleStats::mean_omega() const {
  return static_cast<double>(total_weight) / (static_cast<double>(count) * static_cast<double>(n));
}

double SampleStats::mean_rho() const {
  return static_cast<double>(total_runs) / (static_cast<double>(count) * static_cast<double>(n));
}

double SampleStats::beta_hat(std::int64_t ell) const {
  const auto it = histogram.find(ell);
  if (it == histogram.end()) return 0.0;
  return static_cast<double>(it->second) / (static_cast<double>(count) * static_cast<double>(n));
}

double SampleStats::beta_stderr(std::int64_t ell) const {
  if (count < 2) return 0.0;
  const auto it = histogram.find(ell);
  if (it == histogram.end()) return 0.0;
  const double k = static_cast<double>(count);
  const double sum = static_cast<double>(it->second);
  const double sq = static_cast<double>(histogram_sq.at(ell));
  const double var = std::max(0.0, (sq - sum * sum / k) / (k - 1.0));
  return std::sqrt(var / k) / static_cast<double>(n);
}

unsigned default_threads() {
  if (const char* env = std::getenv("CSL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

SampleStats sample_sequences(const RunSet& set, std::int64_t n, std::int64_t count,
                             std::uint64_t seed, unsigned threads) {
  if (n < 1) throw Error(ErrorKind::BadParameters, "sample length n must be >= 1");
  if (count < 1) throw Error(ErrorKind::BadParameters, "sample count must be >= 1");
  const double lambda = solve_lambda(set);
  const RunDrawer draw(set, lambda);
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));

  std::vector<Partial> partials(threads);
  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](unsigned worker) {
    try {
      for (std::int64_t i = worker; i < count; i += threads) {
        draw_one(set, draw, n, seed, static_cast<std::uint64_t>(i), partials[worker]);
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  Partial all;
  for (const auto& p : partials) all.merge(p);
  SampleStats s;
  s.n = n;
  s.count = count;
  s.seed = seed;
  s.total_weight = all.weight;
  s.total_runs = all.runs;
  s.rejections = all.rejections;
  s.histogram = std::move(all.hist);
  s.histogram_sq = std::move(all.hist_sq);
  return s;
}

nlohmann::json to_json(const SampleStats& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["count"] = s.count;
  j["seed"] = s.seed;
  j["mean_omega"] = s.mean_omega();
  j["mean_rho"] = s.mean_rho();
  j["total_runs"] = s.total_runs;
  j["rejections"] = s.rejections;
  nlohmann::json hist = nlohmann::json::object();
  nlohmann::json beta = nlohmann::json::object();
  for (const auto& [ell, c] : s.histogram) {
    hist[std::to_string(ell)] = c;
    beta[std::to_string(ell)] = {{"value", s.beta_hat(ell)}, {"stderr", s.beta_stderr(ell)}};
  }
  j["histogram"] = hist;
  j["beta_hat"] = beta;
  return j;
}

GoodnessOfFit chi_square_gof(const SampleStats& s, const TypicalProfile& p) {
  const double total = static_cast<double>(s.total_runs);
  if (total <= 0.0) throw Error(ErrorKind::EmptySeries, "no runs to test");
  // Walk L upward, closing a bin whenever the remaining expected mass allows it;
  // the last bin absorbs the tail.
  const std::int64_t last_seen = s.histogram.empty() ? p.set.lmin() : s.histogram.rbegin()->first;
  const std::int64_t cap = p.set.bounded() ? *p.set.lmax() : std::max<std::int64_t>(last_seen, 64);
  const auto elements = p.set.elements_upto(cap);

  struct Bin {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Bin> bins;
  double remaining = 1.0;
  Bin current;
  for (auto ell : elements) {
    const double prob = p.run_dist.probability(ell);
    const auto it = s.histogram.find(ell);
    current.expected += total * prob;
    current.observed += it == s.histogram.end() ? 0.0 : static_cast<double>(it->second);
    remaining -= prob;
    if (current.expected >= 5.0 && total * remaining >= 5.0) {
      bins.push_back(current);
      current = Bin{};
    }
  }
  current.expected += total * std::max(remaining, 0.0);
  for (auto it = s.histogram.upper_bound(cap); it != s.histogram.end(); ++it) {
    current.observed += static_cast<double>(it->second);
  }
  bins.push_back(current);

  GoodnessOfFit g;
  g.bins = static_cast<std::int64_t>(bins.size());
  for (const auto& b : bins) {
    if (b.expected > 0.0) {
      g.statistic += (b.observed - b.expected) * (b.observed - b.expected) / b.expected;
    }
  }
  g.dof = g.bins - 1;
  if (g.dof >= 1) {
    const boost::math::chi_squared dist(static_cast<double>(g.dof));
    g.p_value = boost::math::cdf(boost::math::complement(dist, g.statistic));
  }
  return g;
}

std::string histogram_to_csv(const SampleStats& s, const TypicalProfile& p) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << "ell,expected,observed\n";
  const std::int64_t last = s.histogram.empty() ? p.set.lmin() : s.histogram.rbegin()->first;
  for (auto ell : p.set.elements_upto(last)) {
    const auto it = s.histogram.find(ell);
    os << ell << ',' << static_cast<double>(s.total_runs) * p.run_dist.probability(ell) << ','
       << (it == s.histogram.end() ? 0 : it->second) << '\n';
  }
  return os.str();
}

}  // namespace csl
