#ifndef CROWDGAME_STRATEGY_HPP
#define CROWDGAME_STRATEGY_HPP

#include "crowdgame/game.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace crowdgame {

using StrategyIndex = std::uint16_t;
inline constexpr std::size_t kNumStrategies = 4096;

// Response to the opponent's last realized action. The table is ordered
// (CA, CN, C*, SA, SN, S*); the index is the base-4 number formed by the
// responses with the CA entry most significant.
class ReactiveStrategy {
 public:
  constexpr ReactiveStrategy() = default;
  constexpr explicit ReactiveStrategy(std::array<SelectedAction, 6> table) : table_(table) {}

  static ReactiveStrategy unconditional(SelectedAction a) {
    std::array<SelectedAction, 6> t;
    t.fill(a);
    return ReactiveStrategy(t);
  }

  SelectedAction respond(RealizedAction opponent_realized) const {
    return table_[static_cast<std::size_t>(opponent_realized)];
  }
  const std::array<SelectedAction, 6>& table() const { return table_; }

  StrategyIndex index() const;

  // "CA,CA,CA,CA,CA,SA"
  std::string to_string() const;

  friend bool operator==(const ReactiveStrategy&, const ReactiveStrategy&) = default;

 private:
  std::array<SelectedAction, 6> table_{};
};

StrategyIndex encode(const ReactiveStrategy& s);
// Throws std::out_of_range for i >= 4096.
ReactiveStrategy decode(std::size_t i);
inline SelectedAction respond(const ReactiveStrategy& s, RealizedAction a) { return s.respond(a); }

// Six comma-separated actions; nullopt on malformed input.
std::optional<ReactiveStrategy> parse_strategy(std::string_view text);

// Accepts either a decimal index or a six-action table string.
StrategyIndex parse_strategy_ref(std::string_view text);

struct CatalogEntry {
  int number;  // 1..16
  std::string_view name;
  ReactiveStrategy strategy;
  std::string_view ess_region;
  std::string_view efficiency_region;  // empty when never efficient

  StrategyIndex index() const { return strategy.index(); }
};

// The sixteen reactive strategies that are ESSs somewhere in the (d,q) plane.
std::span<const CatalogEntry> catalog();
const CatalogEntry& catalog_entry(int number);
std::optional<int> catalog_number(StrategyIndex index);

inline StrategyIndex uncond_ca() { return 0; }
inline StrategyIndex uncond_cn() { return 1365; }
inline StrategyIndex uncond_sa() { return 2730; }

}  // namespace crowdgame

#endif
