#include "crowdgame/markov.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace crowdgame;

TEST_CASE("transition rows are stochastic polynomials") {
  oracle::Gen g(21);
  const auto one = EpsPolynomial::constant(1);
  for (int i = 0; i < 200; ++i) {
    const auto t = build_transition_exact(g.strategy(), g.strategy());
    for (const auto& row : t) {
      EpsPolynomial sum;
      for (const auto& e : row) sum += e;
      CHECK(sum == one);
    }
  }
}

TEST_CASE("float transition matches the rule-based oracle") {
  oracle::Gen g(22);
  for (int i = 0; i < 100; ++i) {
    const auto n = g.strategy(), m = g.strategy();
    const auto t = build_transition_float(n, m, 0.07);
    const auto o = oracle::transition(n, m, 0.07);
    for (std::size_t a = 0; a < 9; ++a) {
      for (std::size_t b = 0; b < 9; ++b) CHECK(t[a][b] == doctest::Approx(o[a][b]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact payoffs evaluated at eps agree with power iteration") {
  oracle::Gen g(23);
  const double d = 0.3, q = 0.15, eps = 0.1;
  const Params p{parse_rational("3/10"), parse_rational("3/20")};
  for (int i = 0; i < 25; ++i) {
    const auto n = g.strategy(), m = g.strategy();
    const double want = oracle::payoff(n, m, d, q, eps);
    const double exact = average_payoff_exact(n, m, p).evaluate(Rational(1, 10)).get_d();
    CHECK(exact == doctest::Approx(want).epsilon(2e-3));
    CHECK(average_payoff_float(n, m, p, eps) == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("payoffs agree with playing the game") {
  const Params p{Rational(2, 5), Rational(1, 4)};
  const std::pair<StrategyIndex, StrategyIndex> pairs[] = {{0, 2}, {2562, 0}, {1365, 2730}, {3075, 1706}};
  for (auto [n, m] : pairs) {
    const double sim = oracle::simulate(n, m, 0.4, 0.25, 0.05, 400000, n * 4096u + m);
    CHECK(average_payoff_float(n, m, p, 0.05) == doctest::Approx(sim).epsilon(0.02));
  }
}

TEST_CASE("homogeneous uncond-CA payoff") {
  const Params p{Rational(1, 5), Rational(1, 20)};
  const auto f = average_payoff_exact(0, 0, p);
  CHECK(f.to_string() == "9/20 + 1/10*eps - 1/20*eps^2");
  CHECK(payoff_series(0, 0, p, 3) == std::vector<Rational>{Rational(9, 20), Rational(1, 10), Rational(-1, 20), 0});
}

TEST_CASE("uncond-SA against uncond-CN without errors") {
  const Params p{Rational(1, 5), Rational(1, 20)};
  CHECK(average_payoff_float(uncond_sa(), uncond_cn(), p, 0.0) == doctest::Approx(0.15));
  // a reducible chain at eps = 0 has no unique answer
  // copying the opponent's CA/CN makes both (CA,CA) and (CN,CN) absorbing
  const auto copy = parse_strategy_ref("CA,CN,CN,CN,CN,CN");
  CHECK_THROWS_AS(stationary_float(copy, copy, 0.0), NumericalFailure);
  CHECK_NOTHROW(stationary_float(uncond_cn(), uncond_cn(), 0.0));
}

TEST_CASE("role swap mirrors the stationary distribution") {
  oracle::Gen g(24);
  for (int i = 0; i < 20; ++i) {
    const auto n = g.strategy(), m = g.strategy();
    const auto a = stationary_exact(n, m), b = stationary_exact(m, n);
    for (auto s : kChainStates) CHECK(a.probability(index_of(s)) == b.probability(index_of(mirror(s))));
  }
}

TEST_CASE("pair cache returns both roles from one solve") {
  ExactPairCache cache(8);
  const Params p{Rational(1, 3), Rational(1, 7)};
  const auto [a, b] = cache.payoffs(2562, 0, p);
  CHECK(a == average_payoff_exact(2562, 0, p));
  CHECK(b == average_payoff_exact(0, 2562, p));
  cache.payoffs(0, 2562, Params{Rational(1, 2), Rational(1, 9)});
  CHECK(cache.solves() == 1);
  for (StrategyIndex i = 0; i < 20; ++i) cache.payoffs(i, 100, p);
  CHECK(cache.size() <= 8);
}

TEST_CASE("selected-action limits") {
  const auto ca = selected_pair_limit(0, 0);
  CHECK(ca[0][0] == 1);
  const auto sa = selected_pair_limit(uncond_sa(), uncond_cn());
  CHECK(sa[2][1] == 1);
  Rational total = 0;
  for (const auto& row : selected_pair_limit(1706, 2645)) {
    for (const auto& v : row) total += v;
  }
  CHECK(total == 1);
}

TEST_CASE("float solver matches the exact solution") {
  FloatChainSolver solver(1e-3);
  oracle::Gen g(25);
  const Params p{Rational(3, 5), Rational(3, 10)};
  const auto stage = stage_payoff_vector_float(p);
  for (int i = 0; i < 20; ++i) {
    const auto n = g.strategy(), m = g.strategy();
    const auto [a, b] = solver.payoffs(n, m, stage);
    CHECK(a == doctest::Approx(average_payoff_exact(n, m, p).evaluate(1e-3)).epsilon(1e-9));
    CHECK(b == doctest::Approx(average_payoff_exact(m, n, p).evaluate(1e-3)).epsilon(1e-9));
  }
}
