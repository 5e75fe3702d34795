#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "csl/capacity.hpp"
#include "csl/error.hpp"

using namespace csl;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double sigma_n(double w, double r) {
  return (1 - w) * oracle::h2(r / (2 * (1 - w))) + w * oracle::h2(r / (2 * w));
}

/// Interior points of the region of `s` on a coarse grid.
std::vector<ParamPoint> interior_grid(const RunSet& s, int steps) {
  std::vector<ParamPoint> out;
  for (int i = 1; i < steps; ++i) {
    for (int k = 1; k < steps; ++k) {
      const ParamPoint p{double(i) / steps, 2.0 * k / steps};
      if (classify(s, p, 1e-6) == RegionLocation::Interior) out.push_back(p);
    }
  }
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::ParseError;
}

const std::vector<const char*> kSets = {"1,2", "1,2,3", "2,3", "1,3,4", "interval:2:inf",
                                        "interval:1:inf", "2,5", "interval:1:4"};

}  // namespace

TEST(Lambda, KnownRoots) {
  EXPECT_NEAR(solve_lambda(naturals()), 0.5, 1e-15);
  EXPECT_NEAR(solve_lambda(parse_runset("1,2")), kGolden, 1e-14);
  EXPECT_NEAR(solve_lambda(interval_from(2)), kGolden, 1e-14);
}

TEST(Lambda, MatchesBisectionOnTruncatedSums) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    const double lam = solve_lambda(s);
    EXPECT_NEAR(lam, oracle::lambda(s.elements_upto(4000)), 1e-13) << text;
    EXPECT_NEAR(power_sums(s, lam).a, 1.0, 1e-13) << text;
  }
}

TEST(CapacityWR, UnconstrainedClosedForm) {
  const auto n = naturals();
  for (int i = 1; i < 30; ++i) {
    for (int k = 1; k < 30; ++k) {
      const double w = i / 30.0;
      const double r = 2 * std::min(w, 1 - w) * k / 30.0;
      const auto res = capacity_wr(n, {w, r});
      EXPECT_EQ(res.region, RegionLocation::Interior);
      EXPECT_NEAR(res.bits(), sigma_n(w, r), 1e-12);
      EXPECT_NEAR(*res.alpha, 1 - r / (2 * (1 - w)), 1e-12);
      EXPECT_NEAR(*res.beta, 1 - r / (2 * w), 1e-12);
      EXPECT_EQ(res.log_term_coefficient, -1.0);
    }
  }
}

TEST(CapacityWR, MatchesEntropicOracle) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    const auto elems = s.elements_upto(s.bounded() ? *s.lmax() : 3000);
    for (const auto& p : interior_grid(s, 12)) {
      const double want = oracle::sigma_entropic(elems, p.omega, p.rho, s.bounded() ? 1e6 : 1.0);
      EXPECT_NEAR(capacity_wr(s, p).bits(), want, 1e-10) << text << " " << p.omega << "," << p.rho;
    }
  }
}

TEST(CapacityWR, RootResidualsAndGamma) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 10)) {
      const auto res = capacity_wr(s, p);
      const auto a = power_sums(s, *res.alpha);
      const auto b = power_sums(s, *res.beta);
      const double m0 = 2 * (1 - p.omega) / p.rho;
      const double m1 = 2 * p.omega / p.rho;
      EXPECT_LE(std::abs(a.a1 - m0 * a.a), 1e-12 * m0 * a.a);
      EXPECT_LE(std::abs(b.a1 - m1 * b.a), 1e-12 * m1 * b.a);
      EXPECT_NEAR(a.a * b.a * *res.gamma * *res.gamma, 1.0, 1e-12);
    }
  }
}

TEST(CapacityWR, RegionDispatch) {
  const auto s = parse_runset("1,2");
  const auto corner = capacity_wr(s, {0.5, 1.0});
  EXPECT_EQ(corner.region, RegionLocation::Corner);
  EXPECT_EQ(corner.bits(), 0.0);
  EXPECT_EQ(corner.log_term_coefficient, 0.0);

  const auto edge = capacity_wr(s, {0.4, 0.8});
  EXPECT_EQ(edge.region, RegionLocation::EdgeUpperLeft);
  EXPECT_EQ(edge.log_term_coefficient, -0.5);
  ASSERT_TRUE(edge.dist1 && edge.dist1->atom);
  EXPECT_EQ(*edge.dist1->atom, 1);
  EXPECT_EQ(edge.dist1->entropy_bits(), 0.0);

  const auto out = capacity_wr(s, {0.1, 0.8});
  EXPECT_TRUE(out.is_outside());
  EXPECT_EQ(out.region, RegionLocation::Outside);
  EXPECT_EQ(kind_of([&] { (void)out.bits(); }), ErrorKind::CapacityOutOfRange);
  EXPECT_EQ(to_json(out)["sigma"], "-inf");

  const auto flat = capacity_wr(naturals(), {0.3, 0.0});
  EXPECT_EQ(flat.region, RegionLocation::EdgeLowerLeft);
  EXPECT_EQ(flat.bits(), 0.0);
}

TEST(CapacityWR, EdgesAreLimitsOfTheInterior) {
  for (const char* text : {"1,2", "1,2,3", "2,3", "interval:2:5"}) {
    const auto s = parse_runset(text);
    const double lmin = double(s.lmin());
    const double lmax = s.lmax_real();
    for (double w : {0.42, 0.5, 0.55}) {
      struct Probe {
        ParamPoint edge;
        ParamPoint inside;
      };
      const double eps = 1e-7;
      const std::vector<Probe> probes = {
          {{w, 2 * w / lmin}, {w, 2 * w / lmin - eps}},
          {{w, 2 * (1 - w) / lmin}, {w, 2 * (1 - w) / lmin - eps}},
          {{w, 2 * (1 - w) / lmax}, {w, 2 * (1 - w) / lmax + eps}},
          {{w, 2 * w / lmax}, {w, 2 * w / lmax + eps}},
      };
      for (const auto& pr : probes) {
        const auto e = capacity_wr(s, pr.edge);
        const auto i = capacity_wr(s, pr.inside);
        if (e.is_outside() || i.is_outside() || e.region == RegionLocation::Corner) continue;
        EXPECT_NEAR(e.bits(), i.bits(), 1e-5) << text << " " << pr.edge.omega << "," << pr.edge.rho;
      }
    }
  }
}

TEST(CapacityWR, Symmetry) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 16)) {
      EXPECT_NEAR(capacity_wr(s, p).bits(), capacity_wr(s, {1 - p.omega, p.rho}).bits(), 1e-12);
    }
  }
}

TEST(CapacityWR, DiscreteConcavity) {
  const double h = 0.01;
  for (const char* text : {"1,2,3", "2,3", "interval:1:inf", "1,3,4"}) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 20)) {
      auto f = [&](double w, double r) { return capacity_wr(s, {w, r}); };
      const auto a = f(p.omega - h, p.rho), c = f(p.omega + h, p.rho);
      if (!a.is_outside() && !c.is_outside()) {
        EXPECT_LE(a.bits() + c.bits() - 2 * f(p.omega, p.rho).bits(), 1e-9);
      }
      const auto d = f(p.omega, p.rho - h), e = f(p.omega, p.rho + h);
      if (!d.is_outside() && !e.is_outside()) {
        EXPECT_LE(d.bits() + e.bits() - 2 * f(p.omega, p.rho).bits(), 1e-9);
      }
    }
  }
}

TEST(CapacityWR, StrictMonotonicityInTheSet) {
  struct Pair {
    const char* small;
    const char* big;
    ParamPoint p;
  };
  for (const auto& pr : std::vector<Pair>{{"1,2", "1,2,3", {0.5, 0.8}},
                                          {"2,3", "1,2,3", {0.5, 0.45}},
                                          {"1,2,3", "interval:1:inf", {0.45, 0.6}},
                                          {"2,3,4", "interval:2:inf", {0.5, 0.4}},
                                          {"1,3", "1,2,3", {0.5, 0.6}}}) {
    EXPECT_LT(capacity_wr(parse_runset(pr.small), pr.p).bits(),
              capacity_wr(parse_runset(pr.big), pr.p).bits())
        << pr.small << " vs " << pr.big;
  }
}

TEST(CapacityWR, ShiftIdentity) {
  for (const char* text : {"1,2", "1,2,3", "interval:1:inf"}) {
    const auto s = parse_runset(text);
    for (std::int64_t sh : {1, 2}) {
      const auto t = s.shifted(sh);
      for (const auto& p : interior_grid(t, 14)) {
        const double f = 1 - double(sh) * p.rho;
        const ParamPoint q{(p.omega - double(sh) * p.rho / 2) / f, p.rho / f};
        EXPECT_NEAR(capacity_wr(t, p).bits(), f * capacity_wr(s, q).bits(), 1e-9);
      }
    }
  }
}

TEST(CapacityWR, DecompositionIntoRunsOnlyCapacities) {
  for (const char* text : {"1,2,3", "2,3", "interval:1:inf", "interval:2:inf"}) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 14)) {
      const double want = (1 - p.omega) * capacity_r(s, p.rho / (2 * (1 - p.omega))).bits() +
                          p.omega * capacity_r(s, p.rho / (2 * p.omega)).bits();
      EXPECT_NEAR(capacity_wr(s, p).bits(), want, 1e-9);
    }
  }
}

TEST(CapacityWR, EntropicCharacterization) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 12)) {
      const auto r = capacity_wr(s, p);
      EXPECT_NEAR(r.bits(), 0.5 * p.rho * (r.dist0->entropy_bits() + r.dist1->entropy_bits()),
                  1e-10);
    }
  }
}

TEST(CapacityW, ClosedFormAndSupremum) {
  for (int i = 1; i < 40; ++i) {
    const double w = i / 40.0;
    const auto r = capacity_w(naturals(), w);
    EXPECT_NEAR(r.bits(), oracle::h2(w), 1e-12);
    EXPECT_NEAR(*r.alpha, 1 - w, 1e-10);
    EXPECT_NEAR(*r.beta, w, 1e-10);
    EXPECT_EQ(r.log_term_coefficient, -0.5);
  }
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    EXPECT_NEAR(capacity_w(s, 0.5).bits(), -std::log2(solve_lambda(s)), 1e-12) << text;
    EXPECT_NEAR(rho_star_omega(s, 0.5), 1.0 / power_sums(s, solve_lambda(s)).a1, 1e-10) << text;
    for (double w : {0.35, 0.45, 0.6}) {
      const auto [lo, hi] = weight_range(s, s);
      if (w <= lo || w >= hi) continue;
      const double rho_lo = std::max(2 * w / s.lmax_real(), 2 * (1 - w) / s.lmax_real());
      const double rho_hi = std::min(2 * w / double(s.lmin()), 2 * (1 - w) / double(s.lmin()));
      const auto [arg, best] = oracle::golden_max(
          [&](double r) { return capacity_wr(s, {w, r}).bits(); }, rho_lo + 1e-12, rho_hi - 1e-12);
      EXPECT_NEAR(capacity_w(s, w).bits(), best, 1e-10) << text << " " << w;
      EXPECT_NEAR(rho_star_omega(s, w), arg, 1e-5) << text << " " << w;
      EXPECT_NEAR(capacity_wr(s, {w, rho_star_omega(s, w)}).bits(), capacity_w(s, w).bits(), 1e-10);
    }
  }
}

TEST(CapacityW, RangeAndEndpoints) {
  const auto s = parse_runset("1,2");
  EXPECT_EQ(capacity_w(s, 1.0 / 3).bits(), 0.0);
  EXPECT_EQ(capacity_w(s, 2.0 / 3).bits(), 0.0);
  EXPECT_EQ(kind_of([&] { (void)capacity_w(s, 0.2); }), ErrorKind::OutOfRange);
  EXPECT_NEAR(rho_star_omega(naturals(), 0.5), 0.5, 1e-12);
}

TEST(CapacityR, ClosedForms) {
  for (int i = 1; i < 40; ++i) {
    const double rho = i / 40.0;
    const auto r = capacity_r(naturals(), rho);
    EXPECT_NEAR(r.bits(), oracle::h2(rho), 1e-12);
    EXPECT_NEAR(*r.alpha, 1 - rho, 1e-12);
  }
  for (std::int64_t d = 1; d <= 4; ++d) {
    for (int i = 1; i < 40; ++i) {
      const double rho = i / 40.0 / double(d + 1);
      const double f = 1 - double(d) * rho;
      EXPECT_NEAR(capacity_r(interval_from(d + 1), rho).bits(), f * oracle::h2(rho / f), 1e-12);
    }
  }
  const auto s = parse_runset("2,3");
  EXPECT_EQ(capacity_r(s, 0.5).bits(), 0.0);
  EXPECT_EQ(capacity_r(s, 1.0 / 3).bits(), 0.0);
  EXPECT_EQ(kind_of([&] { (void)capacity_r(s, 0.6); }), ErrorKind::OutOfRange);
}

TEST(CapacityR, MaximumIsTheUnconstrainedCapacity) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    const auto [arg, best] = oracle::golden_max([&](double r) { return capacity_r(s, r).bits(); },
                                                1 / s.lmax_real() + 1e-9, 1.0 / double(s.lmin()) - 1e-9);
    EXPECT_NEAR(best, -std::log2(solve_lambda(s)), 1e-12) << text;
    EXPECT_NEAR(arg, 1.0 / power_sums(s, solve_lambda(s)).a1, 1e-5) << text;
  }
}

TEST(TwoSets, ReducesToOneSetAndClosedForm) {
  for (const char* text : {"1,2,3", "interval:1:inf", "2,3"}) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 10)) {
      EXPECT_NEAR(capacity_two_sets(s, s, p).bits(), capacity_wr(s, p).bits(), 1e-12);
    }
  }
  EXPECT_NEAR(capacity_two_sets(naturals(), naturals(), {0.3, 0.4}).bits(), sigma_n(0.3, 0.4),
              1e-12);
  EXPECT_EQ(kind_of([] { (void)capacity_two_sets(naturals(), parse_runset("1,2"), {0.9, 0.9}); }),
            ErrorKind::OutOfRange);
}

TEST(TwoSets, SupremaAgreeWithGridSearch) {
  const auto z = parse_runset("1,2");
  const auto o = parse_runset("2,3");
  const auto [lo, hi] = weight_range(z, o);
  EXPECT_NEAR(lo, 2.0 / 4.0, 1e-15);
  EXPECT_NEAR(hi, 3.0 / 4.0, 1e-15);
  for (double w : {0.55, 0.6, 0.7}) {
    const double rlo = std::max(2 * w / 3, 2 * (1 - w) / 2);
    const double rhi = std::min(2 * w / 2, 2 * (1 - w) / 1);
    const auto [arg, best] = oracle::golden_max(
        [&](double r) { return capacity_two_sets(z, o, {w, r}).bits(); }, rlo + 1e-12, rhi - 1e-12);
    EXPECT_NEAR(capacity_two_sets_w(z, o, w).bits(), best, 1e-10);
  }
  for (double r : {0.5, 0.6}) {
    const auto [arg, best] = oracle::golden_max(
        [&](double w) {
          const auto c = capacity_two_sets(z, o, {w, r}, 0.0);
          return c.bits();
        },
        std::max(r / 2 * 2, 1 - r) + 1e-9, std::min(1.5 * r, 1 - r / 2) - 1e-9);
    EXPECT_NEAR(capacity_two_sets_r(z, o, r).bits(), best, 1e-10) << r;
  }
  const auto star = capacity_two_sets_star(z, o);
  const auto [arg, best] = oracle::golden_max(
      [&](double w) { return capacity_two_sets_w(z, o, w).bits(); }, lo + 1e-9, hi - 1e-9);
  EXPECT_NEAR(star.bits(), best, 1e-10);
}

TEST(Distributions, NormalizedWithMatchingMeans) {
  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    for (const auto& p : interior_grid(s, 8)) {
      const auto r = capacity_wr(s, p);
      for (const auto& d : {*r.dist0, *r.dist1}) {
        double total = 0.0, mean = 0.0;
        for (auto l : s.elements_upto(s.bounded() ? *s.lmax() : 20000)) {
          total += d.probability(l);
          mean += double(l) * d.probability(l);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(mean, d.mean, 1e-12 * d.mean);
        const auto ps = power_sums(s, d.base);
        EXPECT_NEAR(ps.a1 / ps.a, d.mean, 1e-12 * d.mean);
      }
    }
  }
}

TEST(Distributions, OptimalLawsAndEntropyRates) {
  const auto n = naturals();
  const auto none = optimal_distributions(n, NoConstraint{});
  for (int l = 1; l <= 10; ++l) EXPECT_NEAR(none.first.probability(l), std::ldexp(1.0, -l), 1e-15);
  EXPECT_FALSE(none.second.has_value());

  const auto both = optimal_distributions(n, WeightRunsConstraint{{0.3, 0.4}});
  EXPECT_NEAR(both.first.mean, 2 * 0.7 / 0.4, 1e-12);
  EXPECT_NEAR(both.second->mean, 2 * 0.3 / 0.4, 1e-12);
  EXPECT_NEAR(both.first.base, 1 - 0.4 / 1.4, 1e-12);

  for (const char* text : kSets) {
    const auto s = parse_runset(text);
    const double rho_star = 1.0 / power_sums(s, solve_lambda(s)).a1;
    const auto grid = interior_grid(s, 24);
    ASSERT_FALSE(grid.empty()) << text;
    const std::vector<DistributionConstraint> cs = {NoConstraint{}, WeightConstraint{0.5},
                                                    RunsConstraint{rho_star},
                                                    WeightRunsConstraint{grid[grid.size() / 2]}};
    for (const auto& c : cs) {
      const auto od = optimal_distributions(s, c);
      EXPECT_NEAR(od.entropy_rate(), od.sigma, 1e-10) << text;
    }
  }
  const auto z = parse_runset("1,2");
  const auto o = parse_runset("2,3");
  for (const DistributionConstraint& c :
       std::vector<DistributionConstraint>{NoConstraint{}, WeightConstraint{0.6}, RunsConstraint{0.6},
                                           WeightRunsConstraint{{0.62, 0.6}}}) {
    const auto od = optimal_distributions(z, o, c);
    EXPECT_NEAR(od.entropy_rate(), od.sigma, 1e-10);
  }
  const auto edge = optimal_distributions(parse_runset("1,2"), WeightRunsConstraint{{0.4, 0.8}});
  ASSERT_TRUE(edge.second->atom.has_value());
  EXPECT_EQ(edge.second->entropy_bits(), 0.0);
  EXPECT_NEAR(edge.entropy_rate(), edge.sigma, 1e-12);
}

TEST(BlockWeight, CapacityAndOptimum) {
  for (std::int64_t lb : {1, 2, 3, 5}) {
    for (int i = 1; i < 20; ++i) {
      const double w = i / 20.0;
      EXPECT_NEAR(capacity_sec(lb, 0, w).bits(), oracle::h2(w), 1e-12);
    }
  }
  const auto opt = sec_optimum(2, 1);
  EXPECT_NEAR(opt.omega_star, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(opt.sigma_star, 0.5 * std::log2(3.0), 1e-15);
  EXPECT_NEAR(capacity_sec(2, 1, 2.0 / 3).bits(), 0.5 * std::log2(3.0), 1e-12);
  const auto [arg, best] =
      oracle::golden_max([](double w) { return capacity_sec(3, 1, w).bits(); }, 1.0 / 3 + 1e-9, 1 - 1e-9);
  EXPECT_NEAR(best, sec_optimum(3, 1).sigma_star, 1e-12);
  EXPECT_NEAR(arg, sec_optimum(3, 1).omega_star, 1e-5);
  EXPECT_EQ(capacity_sec(2, 1, 0.5).bits(), 0.0);
  EXPECT_EQ(capacity_sec(2, 1, 1.0).bits(), 0.0);
  EXPECT_EQ(kind_of([] { (void)capacity_sec(2, 1, 0.3); }), ErrorKind::OutOfRange);
}

TEST(Manhattan, RateFunction) {
  for (int i = 1; i < 50; ++i) {
    const double w = i / 50.0;
    EXPECT_NEAR(capacity_manhattan(2, w).bits(), oracle::h2(w), 1e-12);
  }
  for (std::int64_t q = 2; q <= 8; ++q) {
    EXPECT_NEAR(capacity_manhattan(q, (q - 1) / 2.0).bits(), std::log2(double(q)), 1e-12);
  }
  EXPECT_NEAR(*capacity_manhattan(3, 1.0).alpha, 1.0, 1e-12);
  EXPECT_EQ(capacity_manhattan(4, 0.0).bits(), 0.0);
  EXPECT_EQ(capacity_manhattan(4, 3.0).bits(), 0.0);
  // Direct maximum-entropy check on {0..3}: entropy of the tilted law.
  const double w = 1.2;
  const double x = oracle::bisect(
      [&](double y) { return (y + 2 * y * y + 3 * y * y * y) / (1 + y + y * y + y * y * y) - w; }, 0, 10);
  const double z = 1 + x + x * x + x * x * x;
  double h = 0;
  for (int i = 0; i < 4; ++i) {
    const double p = std::pow(x, i) / z;
    h -= p * std::log2(p);
  }
  EXPECT_NEAR(capacity_manhattan(4, w).bits(), h, 1e-12);
}

TEST(CapacityJson, SchemaFields) {
  const auto j = to_json(capacity_wr(naturals(), {0.5, 0.5}));
  EXPECT_EQ(j["sigma"], 1.0);
  EXPECT_EQ(j["region"], "interior");
  EXPECT_TRUE(j.contains("alpha") && j.contains("beta") && j.contains("dist0"));
  EXPECT_FALSE(j.contains("lambda"));
  EXPECT_TRUE(j["dist0"].contains("base") && j["dist0"].contains("normalizer"));
  EXPECT_EQ(nlohmann::json::parse(j.dump()).dump(), j.dump());
}

TEST(CapacityErrors, SingletonSetsAreRejected) {
  EXPECT_EQ(kind_of([] { (void)solve_lambda(make_part_set(ExplicitList{{2}})); }),
            ErrorKind::BadParameters);
}
