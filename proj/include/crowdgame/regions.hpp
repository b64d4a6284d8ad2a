#ifndef CROWDGAME_REGIONS_HPP
#define CROWDGAME_REGIONS_HPP

#include "crowdgame/rational.hpp"
#include "crowdgame/strategy.hpp"

#include <bitset>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crowdgame {

// Closed-form regions of the (d,q) plane. A..J label where the catalog
// strategies are ESSs; K, L split A; L1/L2 split L along q = 1 - 2d.
enum class Region { A, B, C, D, E, F, G, H, I, J, K, L, L1, L2 };
inline constexpr std::size_t kNumRegions = 14;

std::string_view to_string(Region r);
std::optional<Region> parse_region(std::string_view s);

struct RegionSet {
  std::bitset<kNumRegions> members;
  // Some defining inequality holds with equality.
  bool on_boundary = false;

  bool contains(Region r) const { return members.test(static_cast<std::size_t>(r)); }
  void insert(Region r) { members.set(static_cast<std::size_t>(r)); }
  // Concatenated labels, e.g. "AFK" or "AHLL2".
  std::string labels() const;
};

RegionSet region_labels(const Rational& d, const Rational& q);

// Catalog strategies whose listed ESS (efficiency) region contains the point.
std::vector<StrategyIndex> predicted_ess(const RegionSet& regions);
std::vector<StrategyIndex> predicted_efficient(const RegionSet& regions);

// k/20 + 1/1000 for k = 1..19; the offset keeps the points off the region boundaries.
std::vector<Rational> default_grid_axis();

}  // namespace crowdgame

#endif
