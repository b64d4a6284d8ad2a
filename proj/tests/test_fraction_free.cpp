#include "crowdgame/fraction_free.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace crowdgame;

namespace {

// Random row-stochastic matrix whose entries are nonnegative for small eps:
// each row mixes a few targets with weights c + k*eps, rebalanced on the diagonal.
IntegerPolyMatrix random_chain(oracle::Gen& g, std::size_t n) {
  IntegerPolyMatrix t(n, std::vector<IntegerPoly>(n, IntegerPoly{}));
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t used0 = 0, used1 = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || g.integer(0, 2) == 0) continue;
      const std::int64_t c0 = g.integer(0, 1), c1 = g.integer(1, 3);
      t[i][j] = {0, c1, c0 ? 0 : 1};
      used1 += c1;
      used0 += c0 ? 0 : 1;
    }
    t[i][i] = {1, -used1, -used0};
    // Keep the chain irreducible for eps > 0.
    const std::size_t next = (i + 1) % n;
    if (t[i][next].empty()) {
      t[i][next] = {0, 1};
      t[i][i][1] -= 1;
    }
  }
  return t;
}

EpsPolyMatrix to_eps(const IntegerPolyMatrix& t) {
  EpsPolyMatrix out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (const auto& e : t[i]) {
      std::vector<Rational> c;
      for (auto v : e) c.emplace_back(static_cast<long>(v));
      out[i].emplace_back(c);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("two-state chain") {
  // leave 0 with prob eps, leave 1 with prob 2 eps: stationary (2/3, 1/3)
  IntegerPolyMatrix t = {{{1, -1}, {0, 1}}, {{0, 2}, {1, -2}}};
  const auto w = solve_stationary_exact(t);
  CHECK(w.probability(0).limit() == Rational(2, 3));
  CHECK(w.probability(1).limit() == Rational(1, 3));
  CHECK(w.probability(0) == EpsRationalFunction(EpsPolynomial::constant(Rational(2, 3))));
}

TEST_CASE("reducible chain is rejected") {
  IntegerPolyMatrix t = {{{1}, {}}, {{}, {1}}};
  CHECK_THROWS(solve_stationary_exact(t));
}

TEST_CASE("random chains: stationarity holds as a polynomial identity") {
  oracle::Gen g(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(2, 9));
    const auto t = random_chain(g, n);
    const auto w = solve_stationary_exact(t);
    const auto te = to_eps(t);
    EpsPolynomial sum;
    for (std::size_t j = 0; j < n; ++j) {
      EpsPolynomial flow;
      for (std::size_t i = 0; i < n; ++i) flow += w.weights[i] * te[i][j];
      CHECK(flow == w.weights[j]);
      sum += w.weights[j];
    }
    CHECK(sum == w.total);
    CHECK(w.total.lowest_order()->coefficient > 0);

    const auto big = solve_stationary_exact_bigint(t);
    const auto viaeps = solve_stationary_exact(te);
    for (std::size_t s = 0; s < n; ++s) {
      CHECK(big.probability(s) == w.probability(s));
      CHECK(viaeps.probability(s) == w.probability(s));
    }
  }
}

TEST_CASE("expectation is the weighted average") {
  IntegerPolyMatrix t = {{{1, -1}, {0, 1}}, {{0, 2}, {1, -2}}};
  const auto w = solve_stationary_exact(t);
  const std::vector<Rational> v = {Rational(3), Rational(6)};
  CHECK(w.expectation(v).limit() == 4);
}
