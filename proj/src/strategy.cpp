#include "crowdgame/strategy.hpp"

#include <charconv>
#include <stdexcept>

namespace crowdgame {

namespace {

constexpr SelectedAction CA = SelectedAction::CA;
constexpr SelectedAction CN = SelectedAction::CN;
constexpr SelectedAction SA = SelectedAction::SA;
constexpr SelectedAction SN = SelectedAction::SN;

using T = std::array<SelectedAction, 6>;

const std::array<CatalogEntry, 16> kCatalog = {{
    {1, "uncond-CA", ReactiveStrategy(T{CA, CA, CA, CA, CA, CA}), "A", ""},
    {2, "uncond-CN", ReactiveStrategy(T{CN, CN, CN, CN, CN, CN}), "B", "B"},
    {3, "uncond-SA", ReactiveStrategy(T{SA, SA, SA, SA, SA, SA}), "C", "C"},
    {4, "strategy 4", ReactiveStrategy(T{CN, CN, CN, CN, CN, SA}), "D", "D"},
    {5, "strategy 5", ReactiveStrategy(T{CN, CN, SA, SA, SA, CN}), "D", "D"},
    {6, "strategy 6", ReactiveStrategy(T{CN, CN, SA, SA, SA, SA}), "D", "D"},
    {7, "strategy 7", ReactiveStrategy(T{SA, SA, CN, CN, CN, CN}), "D", "D"},
    {8, "strategy 8", ReactiveStrategy(T{SA, SA, CN, CN, CN, SA}), "D", "D"},
    {9, "strategy 9", ReactiveStrategy(T{SA, SA, SA, SA, SA, CN}), "D", "D"},
    {10, "strategy 10", ReactiveStrategy(T{CN, SA, SA, SA, SA, SA}), "D", ""},
    {11, "strategy 11", ReactiveStrategy(T{CN, SA, CN, CN, CN, SA}), "E", ""},
    {12, "strategy 12", ReactiveStrategy(T{CA, CA, CA, CA, CA, SA}), "F", "K"},
    {13, "strategy 13", ReactiveStrategy(T{SA, SA, CA, CA, CA, CA}), "G", ""},
    {14, "strategy 14", ReactiveStrategy(T{SA, SA, CA, CA, CA, SA}), "H", "L"},
    {15, "strategy 15", ReactiveStrategy(T{SN, CA, CA, CA, CA, SN}), "I", ""},
    {16, "strategy 16", ReactiveStrategy(T{SN, CN, CA, CA, CA, SN}), "J", ""},
}};

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

StrategyIndex ReactiveStrategy::index() const {
  unsigned idx = 0;
  for (auto a : table_) idx = idx * 4 + static_cast<unsigned>(a);
  return static_cast<StrategyIndex>(idx);
}

std::string ReactiveStrategy::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (i) out += ",";
    out += crowdgame::to_string(table_[i]);
  }
  return out;
}

StrategyIndex encode(const ReactiveStrategy& s) { return s.index(); }

ReactiveStrategy decode(std::size_t i) {
  if (i >= kNumStrategies) throw std::out_of_range("strategy index must be in [0, 4095]");
  std::array<SelectedAction, 6> t;
  for (std::size_t k = 6; k-- > 0;) {
    t[k] = static_cast<SelectedAction>(i % 4);
    i /= 4;
  }
  return ReactiveStrategy(t);
}

std::optional<ReactiveStrategy> parse_strategy(std::string_view text) {
  std::array<SelectedAction, 6> t;
  std::size_t k = 0;
  while (true) {
    auto comma = text.find(',');
    auto token = strip(text.substr(0, comma));
    if (k >= 6) return std::nullopt;
    auto a = parse_selected_action(token);
    if (!a) return std::nullopt;
    t[k++] = *a;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (k != 6) return std::nullopt;
  return ReactiveStrategy(t);
}

StrategyIndex parse_strategy_ref(std::string_view text) {
  text = strip(text);
  if (text.find(',') != std::string_view::npos) {
    auto s = parse_strategy(text);
    if (!s) throw std::invalid_argument("malformed strategy table: " + std::string(text));
    return s->index();
  }
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value >= kNumStrategies) {
    throw std::invalid_argument("strategy must be an index in [0, 4095] or a table: " + std::string(text));
  }
  return static_cast<StrategyIndex>(value);
}

std::span<const CatalogEntry> catalog() { return kCatalog; }

const CatalogEntry& catalog_entry(int number) {
  if (number < 1 || number > 16) throw std::out_of_range("catalog numbers run from 1 to 16");
  return kCatalog[number - 1];
}

std::optional<int> catalog_number(StrategyIndex index) {
  for (const auto& e : kCatalog) {
    if (e.index() == index) return e.number;
  }
  return std::nullopt;
}

}  // namespace crowdgame
