#ifndef CROWDGAME_REPLICATOR_HPP
#define CROWDGAME_REPLICATOR_HPP

#include "crowdgame/game.hpp"
#include "crowdgame/strategy.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace crowdgame {

// payoff[i][j]: payoff of strategy i against strategy j.
using PayoffMatrix = std::vector<std::vector<double>>;

struct NotBistable : std::domain_error {
  using std::domain_error::domain_error;
};

// dx_i/dt = x_i (pi_i - mean payoff).
std::vector<double> replicator_rhs(std::span<const double> x, const PayoffMatrix& payoff);

struct IntegrationOptions {
  // Step is step_scale / (largest payoff gap among the strategies still in play).
  double step_scale = 0.1;
  double threshold = 1.0 - 1e-6;
  std::size_t max_steps = 1'000'000;
  // Below this a shrinking strategy no longer sets the step size.
  double extinct = 1e-9;
  // Called with the state after every step.
  std::function<void(std::span<const double>)> observer;
};

struct Absorption {
  std::optional<std::size_t> winner;
  std::size_t steps = 0;
  // Growth rates vanished before any vertex was reached (an interior rest point).
  bool stalled = false;
};

Absorption integrate_to_absorption(std::span<const double> x0, const PayoffMatrix& payoff,
                                   const IntegrationOptions& options = {});

PayoffMatrix payoff_matrix_float(std::span<const StrategyIndex> strategies, const Params& p, double eps);

// Share of the simplex edge flowing to strategy 1 in a bistable 2x2 game.
double basin_two(double p11, double p12, double p21, double p22);
double basin_two(StrategyIndex n1, StrategyIndex n2, const Rational& d, const Rational& q, double eps);

struct BasinResult {
  std::vector<StrategyIndex> strategies;
  std::vector<double> share;
  std::vector<std::size_t> count;
  std::size_t unresolved = 0;
  std::size_t total = 0;
  Rational d, q;
  double eps = 0.0;
  int divisions = 0;

  double unresolved_fraction() const { return total ? double(unresolved) / double(total) : 0.0; }
};

// Integrates from every interior grid point (l1, l2, l3)/divisions.
BasinResult basin_three(const PayoffMatrix& payoff, int divisions = 200, unsigned workers = 1,
                        const IntegrationOptions& options = {});
BasinResult basin_three(const std::array<StrategyIndex, 3>& strategies, const Rational& d, const Rational& q,
                        double eps, int divisions = 200, unsigned workers = 1);

// Basin shares of the ESSs coexisting at a point of region A: closed form for
// two of them, grid integration for three. Throws std::domain_error outside A.
BasinResult basins_at(const Rational& d, const Rational& q, double eps, int divisions = 200, unsigned workers = 1);

}  // namespace crowdgame

#endif
