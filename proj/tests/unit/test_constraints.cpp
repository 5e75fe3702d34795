#include <gtest/gtest.h>

#include <cmath>

#include "csl/constraints.hpp"
#include "csl/error.hpp"

using namespace csl;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(RunSet, ValidationErrors) {
  EXPECT_EQ(kind_of([] { make_runset(ExplicitList{{}}); }), ErrorKind::EmptySet);
  EXPECT_EQ(kind_of([] { make_runset(ExplicitList{{3}}); }), ErrorKind::SingletonSet);
  EXPECT_EQ(kind_of([] { make_runset(ExplicitList{{2, 4}}); }), ErrorKind::NonCoprime);
  EXPECT_EQ(kind_of([] { make_runset(ExplicitList{{0, 1}}); }), ErrorKind::NonPositiveElement);
  EXPECT_EQ(kind_of([] { make_runset(IntervalSpec{0, 3}); }), ErrorKind::NonPositiveElement);
  EXPECT_EQ(kind_of([] { make_runset(IntervalSpec{2, 2}); }), ErrorKind::SingletonSet);
  EXPECT_EQ(kind_of([] { parse_runset("1,x"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_runset("interval:1"); }), ErrorKind::ParseError);
}

TEST(RunSet, RelaxedPartSetsAllowSingletons) {
  const auto s = make_part_set(ExplicitList{{2}});
  EXPECT_FALSE(s.admissible());
  EXPECT_EQ(s.lmin(), 2);
  EXPECT_TRUE(make_part_set(ExplicitList{{2, 4}}).contains(4));
}

TEST(RunSet, NormalizesExplicitLists) {
  const auto s = make_runset(ExplicitList{{5, 1, 3, 1}});
  EXPECT_EQ(s.explicit_elements(), (std::vector<std::int64_t>{1, 3, 5}));
  EXPECT_EQ(s.lmin(), 1);
  EXPECT_EQ(*s.lmax(), 5);
  EXPECT_EQ(*s.cardinality(), 3);
}

TEST(RunSet, ParsingAndPrintingRoundTrip) {
  for (const char* text : {"1,2,5", "interval:1:inf", "interval:2:7", "3,4"}) {
    const auto s = parse_runset(text);
    EXPECT_EQ(s.to_string(), text);
    EXPECT_EQ(parse_runset(s.to_string()), s);
  }
  EXPECT_EQ(parse_runset("interval:1:3"), parse_runset("1,2,3"));
  EXPECT_FALSE(parse_runset("interval:1:inf").bounded());
}

TEST(RunSet, JsonRoundTrip) {
  for (const char* text : {"1,2,5", "interval:1:inf", "interval:2:7"}) {
    const auto s = parse_runset(text);
    nlohmann::json j = s;
    EXPECT_EQ(runset_from_json(j), s);
    EXPECT_EQ(nlohmann::json::parse(j.dump()).dump(), j.dump());
  }
}

TEST(RunSet, DkConstraintAndShift) {
  EXPECT_EQ(dk_runset(1, 3), parse_runset("2,3,4"));
  EXPECT_EQ(dk_runset(2, std::nullopt), interval_from(3));
  EXPECT_EQ(parse_runset("1,2").shifted(2), parse_runset("3,4"));
  EXPECT_EQ(naturals().shifted(1), interval_from(2));
  EXPECT_EQ(kind_of([] { dk_runset(2, 2); }), ErrorKind::BadParameters);
}

TEST(RunSet, ElementsUpToCutsUnboundedSets) {
  EXPECT_EQ(interval_from(3).elements_upto(6), (std::vector<std::int64_t>{3, 4, 5, 6}));
  EXPECT_EQ(kind_of([] { (void)naturals().elements(); }), ErrorKind::DomainError);
}

TEST(PowerSums, ClosedFormTailMatchesTruncatedSeries) {
  for (double x : {0.1, 0.5, 0.9}) {
    for (std::int64_t lo : {1, 3}) {
      const auto s = power_sums(interval_from(lo), x);
      double a = 0, a1 = 0, a2 = 0;
      for (int l = static_cast<int>(lo); l < 5000; ++l) {
        const double v = std::pow(x, l);
        a += v;
        a1 += l * v;
        a2 += double(l) * l * v;
      }
      EXPECT_NEAR(s.a, a, 1e-12 * a);
      EXPECT_NEAR(s.a1, a1, 1e-12 * a1);
      EXPECT_NEAR(s.a2, a2, 1e-11 * a2);
    }
  }
  EXPECT_EQ(kind_of([] { power_sums(naturals(), 1.0); }), ErrorKind::DomainError);
}

TEST(Region, ClassifiesInteriorEdgesCornersOutside) {
  const auto s = parse_runset("1,2");
  EXPECT_EQ(classify(s, {0.5, 0.8}), RegionLocation::Interior);
  EXPECT_EQ(classify(s, {0.4, 0.8}), RegionLocation::EdgeUpperLeft);
  EXPECT_EQ(classify(s, {0.6, 0.8}), RegionLocation::EdgeUpperRight);
  EXPECT_EQ(classify(s, {0.45, 0.5}), RegionLocation::Outside);
  EXPECT_EQ(classify(s, {0.4, 0.6}), RegionLocation::EdgeLowerLeft);
  EXPECT_EQ(classify(s, {0.6, 0.6}), RegionLocation::EdgeLowerRight);
  EXPECT_EQ(classify(s, {0.5, 1.0}), RegionLocation::Corner);
  EXPECT_EQ(classify(s, {0.5, 0.5}), RegionLocation::Corner);
  EXPECT_EQ(classify(s, {0.1, 0.8}), RegionLocation::Outside);
  for (const auto& c : region_corners(s)) EXPECT_EQ(classify(s, c), RegionLocation::Corner);
}

TEST(Region, UnboundedLowerEdgeIsRhoZero) {
  const auto n = naturals();
  EXPECT_EQ(classify(n, {0.3, 0.0}), RegionLocation::EdgeLowerLeft);
  EXPECT_EQ(classify(n, {0.7, 0.0}), RegionLocation::EdgeLowerRight);
  EXPECT_EQ(classify(n, {0.5, 0.0}), RegionLocation::Corner);
  EXPECT_EQ(classify(n, {0.5, 1.0}), RegionLocation::Corner);
  EXPECT_EQ(classify(n, {0.3, 0.3}), RegionLocation::Interior);
}

TEST(Region, NamesRoundTrip) {
  for (auto loc : {RegionLocation::Interior, RegionLocation::EdgeUpperLeft,
                   RegionLocation::EdgeUpperRight, RegionLocation::EdgeLowerLeft,
                   RegionLocation::EdgeLowerRight, RegionLocation::Corner,
                   RegionLocation::Outside}) {
    EXPECT_EQ(region_from_string(to_string(loc)), loc);
  }
}
