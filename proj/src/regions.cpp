#include "crowdgame/regions.hpp"

#include <algorithm>
#include <array>

namespace crowdgame {

namespace {

constexpr std::array<std::string_view, kNumRegions> kNames = {"A", "B", "C", "D", "E", "F", "G",
                                                              "H", "I", "J", "K", "L", "L1", "L2"};

// Strict comparison that remembers whether any test sat exactly on a boundary.
struct Comparator {
  bool boundary = false;
  bool lt(const Rational& a, const Rational& b) {
    if (a == b) boundary = true;
    return a < b;
  }
};

const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }
const Rational& min_of(const Rational& a, const Rational& b) { return a < b ? a : b; }

std::vector<StrategyIndex> members_for(const RegionSet& regions, bool efficiency) {
  std::vector<StrategyIndex> out;
  for (const auto& e : catalog()) {
    auto label = efficiency ? e.efficiency_region : e.ess_region;
    if (label.empty()) continue;
    if (regions.contains(*parse_region(label))) out.push_back(e.index());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Region r) { return kNames[static_cast<std::size_t>(r)]; }

std::optional<Region> parse_region(std::string_view s) {
  for (std::size_t i = 0; i < kNumRegions; ++i) {
    if (kNames[i] == s) return static_cast<Region>(i);
  }
  return std::nullopt;
}

std::string RegionSet::labels() const {
  std::string out;
  for (std::size_t i = 0; i < kNumRegions; ++i) {
    if (members.test(i)) out += kNames[i];
  }
  return out;
}

RegionSet region_labels(const Rational& d, const Rational& q) {
  const Rational half(1, 2);
  const Rational h = half * d * (2 - d);
  Comparator c;
  RegionSet r;

  const bool d_small = c.lt(d, half);
  const bool d_large = c.lt(half, d);

  if (d_small && c.lt(q, h)) r.insert(Region::A);
  if (c.lt(h, q)) r.insert(Region::B);
  if (d_large && c.lt(q, d)) r.insert(Region::C);
  if (d_large && c.lt(h, q) && c.lt(q, d)) r.insert(Region::D);
  if (d_large && c.lt(max_of(h, Rational(3, 2) * (2 * d - 1)), q) && c.lt(q, d)) r.insert(Region::E);
  if (c.lt(q, min_of(h, 1 - 2 * d))) r.insert(Region::F);
  if (d_large && c.lt(2 * d - 1, q) && c.lt(q, h)) r.insert(Region::G);
  if (c.lt(max_of(half - d, d - half), q) && c.lt(q, h)) r.insert(Region::H);
  if (c.lt(max_of(d, half), q) && c.lt(q, Rational(3, 4))) r.insert(Region::I);
  {
    const Rational lower = max_of(Rational(2, 5) * (1 + 2 * d - d * d), d);
    const Rational upper = min_of(half * (-1 + 6 * d - 3 * d * d), Rational(6, 7));
    if (c.lt(lower, q) && c.lt(q, upper)) r.insert(Region::J);
  }
  if (c.lt(q, min_of(h, half - d))) r.insert(Region::K);
  if (d_small && c.lt(half - d, q) && c.lt(q, h)) {
    r.insert(Region::L);
    const Rational split = 1 - 2 * d;
    if (c.lt(q, split)) r.insert(Region::L1);
    if (c.lt(split, q)) r.insert(Region::L2);
  }
  r.on_boundary = c.boundary;
  return r;
}

std::vector<StrategyIndex> predicted_ess(const RegionSet& regions) { return members_for(regions, false); }
std::vector<StrategyIndex> predicted_efficient(const RegionSet& regions) { return members_for(regions, true); }

std::vector<Rational> default_grid_axis() {
  std::vector<Rational> out;
  for (int k = 1; k <= 19; ++k) out.emplace_back(make_rational(k, 20) + Rational(1, 1000));
  return out;
}

}  // namespace crowdgame
