#include "crowdgame/strategy.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <set>

using namespace crowdgame;

TEST_CASE("encode and decode round-trip every index") {
  for (std::size_t i = 0; i < kNumStrategies; ++i) {
    const auto s = decode(i);
    CHECK(s.index() == i);
    CHECK(parse_strategy(s.to_string()).value() == s);
    for (auto a : kRealizedActions) {
      CHECK(static_cast<int>(s.respond(a)) ==
            oracle::respond(static_cast<StrategyIndex>(i), static_cast<int>(a)));
    }
  }
  CHECK_THROWS_AS(decode(4096), std::out_of_range);
}

TEST_CASE("unconditional strategies") {
  CHECK(ReactiveStrategy::unconditional(SelectedAction::CA).index() == uncond_ca());
  CHECK(ReactiveStrategy::unconditional(SelectedAction::CN).index() == uncond_cn());
  CHECK(ReactiveStrategy::unconditional(SelectedAction::SA).index() == uncond_sa());
  CHECK(uncond_cn() == 1365);
  CHECK(decode(2).to_string() == "CA,CA,CA,CA,CA,SA");
}

TEST_CASE("parsing strategy references") {
  CHECK(parse_strategy_ref("2730") == 2730);
  CHECK(parse_strategy_ref(" CN,CN,CN,CN,CN,CN ") == 1365);
  CHECK_THROWS_AS(parse_strategy_ref("4096"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy_ref("-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy_ref("CA,CA"), std::invalid_argument);
  CHECK(!parse_strategy("CA,CA,CA,CA,CA,XX"));
}

TEST_CASE("catalog") {
  const auto c = catalog();
  REQUIRE(c.size() == 16);
  std::set<StrategyIndex> seen;
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].number == static_cast<int>(i) + 1);
    CHECK(catalog_number(c[i].index()) == c[i].number);
    seen.insert(c[i].index());
  }
  CHECK(seen.size() == 16);
  CHECK(catalog_entry(1).index() == uncond_ca());
  CHECK(catalog_entry(2).index() == uncond_cn());
  CHECK(catalog_entry(3).index() == uncond_sa());
  CHECK(catalog_entry(12).index() == 2);
  CHECK(!catalog_number(5));
  CHECK_THROWS_AS(catalog_entry(17), std::out_of_range);
}
