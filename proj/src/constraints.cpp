#include "csl/constraints.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "csl/error.hpp"

namespace csl {

namespace {

std::int64_t parse_int(std::string_view token) {
  std::int64_t value = 0;
  auto first = token.data();
  auto last = token.data() + token.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && *(last - 1) == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

double RunSet::lmax_real() const noexcept {
  return lmax_ ? static_cast<double>(*lmax_) : std::numeric_limits<double>::infinity();
}

bool RunSet::contains(std::int64_t ell) const noexcept {
  if (kind_ == Kind::Finite) {
    return std::binary_search(elements_.begin(), elements_.end(), ell);
  }
  return ell >= lmin_ && (!lmax_ || ell <= *lmax_);
}

std::vector<std::int64_t> RunSet::elements_upto(std::int64_t cap) const {
  std::vector<std::int64_t> out;
  if (kind_ == Kind::Finite) {
    for (auto e : elements_) {
      if (e > cap) break;
      out.push_back(e);
    }
    return out;
  }
  const std::int64_t hi = lmax_ ? std::min(*lmax_, cap) : cap;
  for (std::int64_t e = lmin_; e <= hi; ++e) out.push_back(e);
  return out;
}

std::vector<std::int64_t> RunSet::elements() const {
  if (!lmax_) throw Error(ErrorKind::DomainError, "cannot list an unbounded run-length set");
  return elements_upto(*lmax_);
}

std::optional<std::int64_t> RunSet::cardinality() const noexcept {
  if (kind_ == Kind::Finite) return static_cast<std::int64_t>(elements_.size());
  if (!lmax_) return std::nullopt;
  return *lmax_ - lmin_ + 1;
}

RunSet RunSet::shifted(std::int64_t s) const {
  if (kind_ == Kind::Finite) {
    ExplicitList list;
    for (auto e : elements_) list.elements.push_back(e + s);
    return build(list, admissible_);
  }
  IntervalSpec iv{lmin_ + s, lmax_ ? std::optional<std::int64_t>(*lmax_ + s) : std::nullopt};
  return build(iv, admissible_);
}

std::string RunSet::to_string() const {
  std::ostringstream os;
  if (kind_ == Kind::Finite) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (i) os << ',';
      os << elements_[i];
    }
  } else {
    os << "interval:" << lmin_ << ':';
    if (lmax_) {
      os << *lmax_;
    } else {
      os << "inf";
    }
  }
  return os.str();
}

bool operator==(const RunSet& a, const RunSet& b) {
  if (a.lmin_ != b.lmin_ || a.lmax_ != b.lmax_) return false;
  if (!a.lmax_) return true;  // both {lmin, lmin+1, ...}
  return a.elements() == b.elements();
}

RunSet RunSet::build(const RunSetSpec& spec, bool strict) {
  RunSet set;
  if (const auto* list = std::get_if<ExplicitList>(&spec)) {
    if (list->elements.empty()) throw Error(ErrorKind::EmptySet, "run-length set is empty");
    std::vector<std::int64_t> elems = list->elements;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.front() < 1) {
      throw Error(ErrorKind::NonPositiveElement,
                  "run lengths must be >= 1, got " + std::to_string(elems.front()));
    }
    set.kind_ = Kind::Finite;
    set.elements_ = std::move(elems);
    set.lmin_ = set.elements_.front();
    set.lmax_ = set.elements_.back();
  } else {
    const auto& iv = std::get<IntervalSpec>(spec);
    if (iv.lo < 1) {
      throw Error(ErrorKind::NonPositiveElement,
                  "run lengths must be >= 1, got " + std::to_string(iv.lo));
    }
    if (iv.hi && *iv.hi < iv.lo) {
      throw Error(ErrorKind::EmptySet, "interval upper end below lower end");
    }
    set.kind_ = Kind::Interval;
    set.lmin_ = iv.lo;
    set.lmax_ = iv.hi;
  }

  std::int64_t g = 0;
  bool singleton = false;
  if (set.kind_ == Kind::Finite) {
    for (auto e : set.elements_) g = std::gcd(g, e);
    singleton = set.elements_.size() < 2;
  } else {
    singleton = set.lmax_ && *set.lmax_ == set.lmin_;
    g = singleton ? set.lmin_ : 1;
  }
  set.admissible_ = !singleton && g == 1;
  if (strict) {
    if (singleton) {
      throw Error(ErrorKind::SingletonSet, "run-length set needs at least two elements");
    }
    if (g != 1) {
      throw Error(ErrorKind::NonCoprime,
                  "gcd of run lengths is " + std::to_string(g) + ", must be 1");
    }
  }
  return set;
}

RunSet make_runset(const RunSetSpec& spec) { return RunSet::build(spec, true); }

RunSet make_part_set(const RunSetSpec& spec) { return RunSet::build(spec, false); }

RunSet naturals() { return make_runset(IntervalSpec{1, std::nullopt}); }

RunSet interval_from(std::int64_t lo) { return make_runset(IntervalSpec{lo, std::nullopt}); }

RunSet dk_runset(std::int64_t d, std::optional<std::int64_t> k) {
  if (d < 0 || (k && *k <= d)) {
    throw Error(ErrorKind::BadParameters, "(d,k) constraint needs 0 <= d < k");
  }
  return make_runset(IntervalSpec{d + 1, k ? std::optional<std::int64_t>(*k + 1) : std::nullopt});
}

RunSetSpec parse_runset_spec(std::string_view text) {
  constexpr std::string_view prefix = "interval:";
  if (text.substr(0, prefix.size()) == prefix) {
    auto rest = text.substr(prefix.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "expected interval:lo:hi");
    }
    IntervalSpec iv;
    iv.lo = parse_int(rest.substr(0, colon));
    auto hi = rest.substr(colon + 1);
    if (hi != "inf") iv.hi = parse_int(hi);
    return iv;
  }
  ExplicitList list;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - start);
    list.elements.push_back(parse_int(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return list;
}

RunSet parse_runset(std::string_view text) { return make_runset(parse_runset_spec(text)); }

void to_json(nlohmann::json& j, const RunSet& set) {
  if (set.kind() == RunSet::Kind::Finite) {
    j = {{"kind", "finite"}, {"elements", set.explicit_elements()}};
  } else {
    j = {{"kind", "interval"}, {"lo", set.lmin()}};
    if (set.lmax()) {
      j["hi"] = *set.lmax();
    } else {
      j["hi"] = "inf";
    }
  }
}

RunSet runset_from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "finite") {
      return make_runset(ExplicitList{j.at("elements").get<std::vector<std::int64_t>>()});
    }
    if (kind == "interval") {
      IntervalSpec iv;
      iv.lo = j.at("lo").get<std::int64_t>();
      const auto& hi = j.at("hi");
      if (hi.is_string()) {
        if (hi.get<std::string>() != "inf") {
          throw Error(ErrorKind::ParseError, "interval hi must be an integer or \"inf\"");
        }
      } else {
        iv.hi = hi.get<std::int64_t>();
      }
      return make_runset(iv);
    }
    throw Error(ErrorKind::ParseError, "unknown run-set kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

PowerSums power_sums(const RunSet& set, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "power sums need x > 0");
  PowerSums s;
  if (set.bounded()) {
    for (auto ell : set.elements()) {
      const double l = static_cast<double>(ell);
      const double term = std::pow(x, l);
      s.a += term;
      s.a1 += l * term;
      s.a2 += l * l * term;
    }
    return s;
  }
  if (!(x < 1.0)) {
    throw Error(ErrorKind::DomainError, "power sums of an unbounded set need x < 1");
  }
  // sum_{k>=0} (lo+k)^j x^k in closed form, scaled by x^lo.
  const double lo = static_cast<double>(set.lmin());
  const double q = 1.0 - x;
  const double s0 = 1.0 / q;
  const double s1 = x / (q * q);
  const double s2 = x * (1.0 + x) / (q * q * q);
  const double head = std::pow(x, lo);
  s.a = head * s0;
  s.a1 = head * (lo * s0 + s1);
  s.a2 = head * (lo * lo * s0 + 2.0 * lo * s1 + s2);
  return s;
}

std::string_view to_string(RegionLocation loc) {
  switch (loc) {
    case RegionLocation::Interior: return "interior";
    case RegionLocation::EdgeUpperLeft: return "edge_ul";
    case RegionLocation::EdgeUpperRight: return "edge_ur";
    case RegionLocation::EdgeLowerLeft: return "edge_ll";
    case RegionLocation::EdgeLowerRight: return "edge_lr";
    case RegionLocation::Corner: return "corner";
    case RegionLocation::Outside: return "outside";
  }
  return "outside";
}

RegionLocation region_from_string(std::string_view name) {
  for (auto loc : {RegionLocation::Interior, RegionLocation::EdgeUpperLeft,
                   RegionLocation::EdgeUpperRight, RegionLocation::EdgeLowerLeft,
                   RegionLocation::EdgeLowerRight, RegionLocation::Corner,
                   RegionLocation::Outside}) {
    if (to_string(loc) == name) return loc;
  }
  throw Error(ErrorKind::ParseError, "unknown region '" + std::string(name) + "'");
}

RegionSlacks region_slacks(const RunSet& zeros, const RunSet& ones, ParamPoint p) {
  const double w = p.omega;
  const double r = p.rho;
  RegionSlacks s;
  s.upper_left = 2.0 * w / static_cast<double>(ones.lmin()) - r;
  s.upper_right = 2.0 * (1.0 - w) / static_cast<double>(zeros.lmin()) - r;
  s.lower_left = zeros.bounded() ? r - 2.0 * (1.0 - w) / zeros.lmax_real() : r;
  s.lower_right = ones.bounded() ? r - 2.0 * w / ones.lmax_real() : r;
  return s;
}

RegionLocation classify(const RunSet& set, ParamPoint p, double tol) {
  return classify(set, set, p, tol);
}

RegionLocation classify(const RunSet& zeros, const RunSet& ones, ParamPoint p, double tol) {
  const auto s = region_slacks(zeros, ones, p);
  if (s.upper_left < -tol || s.upper_right < -tol || s.lower_left < -tol ||
      s.lower_right < -tol) {
    return RegionLocation::Outside;
  }
  const bool ul = s.upper_left <= tol;
  const bool ur = s.upper_right <= tol;
  bool ll = s.lower_left <= tol;
  bool lr = s.lower_right <= tol;

  // With both constraints unbounded the two lower edges collapse onto rho = 0.
  if (!zeros.bounded() && !ones.bounded() && ll) {
    if (ul || ur || std::abs(p.omega - 0.5) <= tol) return RegionLocation::Corner;
    return p.omega < 0.5 ? RegionLocation::EdgeLowerLeft : RegionLocation::EdgeLowerRight;
  }
  const int active = int(ul) + int(ur) + int(ll) + int(lr);
  if (active == 0) return RegionLocation::Interior;
  if (active >= 2) return RegionLocation::Corner;
  if (ul) return RegionLocation::EdgeUpperLeft;
  if (ur) return RegionLocation::EdgeUpperRight;
  if (ll) return RegionLocation::EdgeLowerLeft;
  return RegionLocation::EdgeLowerRight;
}

std::vector<ParamPoint> region_corners(const RunSet& set) {
  const double lmin = static_cast<double>(set.lmin());
  if (!set.bounded()) {
    return {{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0 / lmin}, {0.5, 0.0}};
  }
  const double lmax = set.lmax_real();
  return {{lmin / (lmin + lmax), 2.0 / (lmin + lmax)},
          {lmax / (lmin + lmax), 2.0 / (lmin + lmax)},
          {0.5, 1.0 / lmin},
          {0.5, 1.0 / lmax}};
}

}  // namespace csl
