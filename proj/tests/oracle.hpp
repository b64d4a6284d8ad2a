// Test-side reference implementations. They rebuild the game from its rules
// with plain doubles and share no code with the library beyond enums.
#ifndef CROWDGAME_TESTS_ORACLE_HPP
#define CROWDGAME_TESTS_ORACLE_HPP

#include "crowdgame/eps_poly.hpp"
#include "crowdgame/game.hpp"
#include "crowdgame/strategy.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using crowdgame::RealizedAction;
using crowdgame::SelectedAction;

// Selected action as two bits: bit 1 set = solo, bit 0 set = no attack.
inline bool solo(int a) { return a & 2; }
inline bool attack(int a) { return !(a & 1); }

// What each side sees of the other, given the two executed actions.
inline std::array<int, 2> observed(int a1, int a2) {
  auto seen = [](int self, int other) {
    // self's action as seen by the opponent
    if (!solo(self) && !solo(other)) return attack(self) ? 0 : 1;  // CA / CN
    if (!solo(self)) return 2;                                     // C*
    if (!solo(other)) return attack(self) ? 3 : 4;                 // SA / SN
    return 5;                                                      // S*
  };
  return {seen(a1, a2), seen(a2, a1)};
}

// Row of the 9-state chain for a realized pair (p1 view, p2 view).
inline int state_index(int r1, int r2) {
  static const int table[6][6] = {
      {0, 1, -1, -1, -1, -1}, {2, 3, -1, -1, -1, -1}, {-1, -1, -1, 4, 5, -1},
      {-1, -1, 6, -1, -1, -1}, {-1, -1, 7, -1, -1, -1}, {-1, -1, -1, -1, -1, 8},
  };
  return table[r1][r2];
}

// Probability that player 1 beats player 2 (ties count half), by midpoint
// quadrature over the productivities.
inline double win_probability(bool c1, bool c2, bool hit1, bool hit2, double d, int grid = 4000) {
  double total = 0.0;
  const int n1 = c1 ? grid : 1, n2 = c2 ? grid : 1;
  for (int i = 0; i < n1; ++i) {
    const double p1 = (c1 ? (i + 0.5) / grid : 0.0) - (hit1 ? d : 0.0);
    for (int j = 0; j < n2; ++j) {
      const double p2 = (c2 ? (j + 0.5) / grid : 0.0) - (hit2 ? d : 0.0);
      total += p1 > p2 ? 1.0 : (p1 == p2 ? 0.5 : 0.0);
    }
  }
  return total / (double(n1) * double(n2));
}

// Expected payoff to player 1 for executed actions a1, a2.
inline double stage(int a1, int a2, double d, double q) {
  const bool c1 = !solo(a1), c2 = !solo(a2);
  // An attack only hurts a crowdsourcer, and attackers pay q only when it lands.
  const bool hit1 = c1 && attack(a2), hit2 = c2 && attack(a1);
  const double cost = hit2 ? q : 0.0;
  return win_probability(c1, c2, hit1, hit2, d, 2000) - cost;
}

inline double flip_probability(int intended, int executed, double eps) {
  const int flips = ((intended ^ executed) & 1) + (((intended ^ executed) >> 1) & 1);
  return std::pow(eps, flips) * std::pow(1.0 - eps, 2 - flips);
}

inline int respond(crowdgame::StrategyIndex s, int observed_action) {
  // digit for observed action k sits at base-4 position 5 - k
  int v = s;
  for (int k = 5; k > observed_action; --k) v /= 4;
  return v % 4;
}

using Matrix = std::array<std::array<double, 9>, 9>;

// Representative executed pair for each state (any pair realizing it).
inline std::array<int, 2> executed_of(int state) {
  static const int pairs[9][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {0, 3}, {2, 0}, {3, 0}, {2, 2}};
  return {pairs[state][0], pairs[state][1]};
}

inline Matrix transition(crowdgame::StrategyIndex n, crowdgame::StrategyIndex m, double eps) {
  Matrix t{};
  for (int s = 0; s < 9; ++s) {
    const auto [e1, e2] = executed_of(s);
    const auto seen = observed(e1, e2);
    const int i1 = respond(n, seen[1]), i2 = respond(m, seen[0]);
    for (int x1 = 0; x1 < 4; ++x1) {
      for (int x2 = 0; x2 < 4; ++x2) {
        const auto o = observed(x1, x2);
        t[s][state_index(o[0], o[1])] += flip_probability(i1, x1, eps) * flip_probability(i2, x2, eps);
      }
    }
  }
  return t;
}

inline std::array<double, 9> power_stationary(const Matrix& t, int iterations = 200000) {
  std::array<double, 9> x;
  x.fill(1.0 / 9);
  for (int it = 0; it < iterations; ++it) {
    std::array<double, 9> y{};
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) y[j] += x[i] * t[i][j];
    }
    double diff = 0.0;
    for (int j = 0; j < 9; ++j) diff += std::abs(y[j] - x[j]);
    x = y;
    if (diff < 1e-15) break;
  }
  return x;
}

inline std::array<double, 9> stage_vector(double d, double q) {
  std::array<double, 9> v{};
  for (int s = 0; s < 9; ++s) {
    const auto [e1, e2] = executed_of(s);
    v[s] = stage(e1, e2, d, q);
  }
  return v;
}

inline double payoff(crowdgame::StrategyIndex n, crowdgame::StrategyIndex m, double d, double q, double eps) {
  const auto x = power_stationary(transition(n, m, eps));
  const auto v = stage_vector(d, q);
  double out = 0.0;
  for (int s = 0; s < 9; ++s) out += x[s] * v[s];
  return out;
}

// Plays the repeated game round by round.
inline double simulate(crowdgame::StrategyIndex n, crowdgame::StrategyIndex m, double d, double q, double eps,
                       long rounds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution err(eps);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int i1 = respond(n, 5), i2 = respond(m, 5);
  double total = 0.0;
  for (long r = 0; r < rounds; ++r) {
    const int x1 = i1 ^ (err(rng) ? 1 : 0) ^ (err(rng) ? 2 : 0);
    const int x2 = i2 ^ (err(rng) ? 1 : 0) ^ (err(rng) ? 2 : 0);
    const bool c1 = !solo(x1), c2 = !solo(x2);
    const bool hit1 = c1 && attack(x2), hit2 = c2 && attack(x1);
    const double p1 = (c1 ? u(rng) : 0.0) - (hit1 ? d : 0.0);
    const double p2 = (c2 ? u(rng) : 0.0) - (hit2 ? d : 0.0);
    total += (p1 > p2 ? 1.0 : (p1 == p2 ? 0.5 : 0.0)) - (hit2 ? q : 0.0);
    const auto o = observed(x1, x2);
    i1 = respond(n, o[1]);
    i2 = respond(m, o[0]);
  }
  return total / double(rounds);
}

// Hand-rolled generators.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  crowdgame::StrategyIndex strategy() { return static_cast<crowdgame::StrategyIndex>(integer(0, 4095)); }
  crowdgame::Rational rational(long max_num = 20, long max_den = 12) {
    return crowdgame::make_rational(integer(-max_num, max_num), integer(1, max_den));
  }
  crowdgame::Rational unit(long den = 997) { return crowdgame::make_rational(integer(1, den - 1), den); }
  crowdgame::EpsPolynomial poly(int max_degree = 5) {
    std::vector<crowdgame::Rational> c;
    const int deg = static_cast<int>(integer(-1, max_degree));
    for (int k = 0; k <= deg; ++k) c.push_back(integer(0, 3) == 0 ? crowdgame::Rational(0) : rational());
    return crowdgame::EpsPolynomial(c);
  }
  crowdgame::EpsPolynomial nonzero_poly(int max_degree = 5) {
    for (;;) {
      auto p = poly(max_degree);
      if (!p.is_zero()) return p;
    }
  }
};

}  // namespace oracle

#endif
