#ifndef CROWDGAME_MARKOV_HPP
#define CROWDGAME_MARKOV_HPP

#include "crowdgame/fraction_free.hpp"
#include "crowdgame/game.hpp"
#include "crowdgame/strategy.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <variant>

namespace crowdgame {

enum class Mode { Exact, Float };

using FloatMatrix = std::array<std::array<double, kNumChainStates>, kNumChainStates>;
using FloatDistribution = std::array<double, kNumChainStates>;

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Actions the two players intend for the next round after observing s.
// Player 1 (strategy n) reacts to player 2's realized action and vice versa.
std::pair<SelectedAction, SelectedAction> intended_actions(const ReactiveStrategy& n, const ReactiveStrategy& m,
                                                           ChainState s);

// Row of the transition matrix for an intended pair, as integer polynomials.
const std::array<IntegerPoly, kNumChainStates>& transition_row(SelectedAction a1, SelectedAction a2);

IntegerPolyMatrix build_transition_integer(StrategyIndex n, StrategyIndex m);
EpsPolyMatrix build_transition_exact(StrategyIndex n, StrategyIndex m);
FloatMatrix build_transition_float(StrategyIndex n, StrategyIndex m, double eps);

// Exact stationary distribution over realized pairs for strategy n (player 1)
// against m (player 2). Valid for all sufficiently small eps > 0.
StationaryWeights stationary_exact(StrategyIndex n, StrategyIndex m);
// Dense direct solve at fixed eps. Throws NumericalFailure if the residual
// exceeds 1e-8 (e.g. a reducible chain at eps = 0).
FloatDistribution stationary_float(StrategyIndex n, StrategyIndex m, double eps);

// Payoff to player 1 per round in the stationary state.
EpsRationalFunction average_payoff_exact(StrategyIndex n, StrategyIndex m, const Params& p);
double average_payoff_float(StrategyIndex n, StrategyIndex m, const Params& p, double eps);

struct PayoffResult {
  StrategyIndex n;
  StrategyIndex m;
  Params params;
  std::variant<EpsRationalFunction, double> value;
};
PayoffResult average_payoff(StrategyIndex n, StrategyIndex m, Mode mode, const Params& p);

// Taylor coefficients of the exact payoff up to eps^order.
std::vector<Rational> payoff_series(StrategyIndex n, StrategyIndex m, const Params& p, int order);

// eps -> 0 limit of the joint distribution of selected actions,
// indexed [action of player 1][action of player 2].
std::array<std::array<Rational, 4>, 4> selected_pair_limit(StrategyIndex n, StrategyIndex m);

// Stationary weights and payoffs are (d,q)-independent up to the final dot
// product, so one solve per unordered pair serves every parameter point and
// both roles. Thread-safe; cleared wholesale when it outgrows its capacity.
class ExactPairCache {
 public:
  explicit ExactPairCache(std::size_t capacity = 4096) : capacity_(capacity) {}

  // Weights of the chain with lo as player 1 and hi as player 2, lo <= hi.
  std::shared_ptr<const StationaryWeights> canonical(StrategyIndex lo, StrategyIndex hi);

  // (pi_nm, pi_mn) from a single solve.
  std::pair<EpsRationalFunction, EpsRationalFunction> payoffs(StrategyIndex n, StrategyIndex m, const Params& p);
  EpsRationalFunction homogeneous(StrategyIndex n, const Params& p) { return payoffs(n, n, p).first; }

  std::size_t size() const;
  std::size_t solves() const;

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::unordered_map<std::uint32_t, std::shared_ptr<const StationaryWeights>> map_;
  std::size_t solves_ = 0;
};

// Floating-point chain solver with the 16 intended-pair rows precomputed for
// one eps.
class FloatChainSolver {
 public:
  explicit FloatChainSolver(double eps);

  double eps() const { return eps_; }
  FloatMatrix transition(StrategyIndex n, StrategyIndex m) const;
  FloatDistribution stationary(StrategyIndex n, StrategyIndex m) const;
  // (pi_nm, pi_mn) for a stage-payoff vector in canonical state order.
  std::pair<double, double> payoffs(StrategyIndex n, StrategyIndex m,
                                    const std::array<double, kNumChainStates>& stage) const;

 private:
  double eps_;
  std::array<std::array<std::array<double, kNumChainStates>, 4>, 4> rows_{};
};

std::array<double, kNumChainStates> stage_payoff_vector_float(const Params& p);

}  // namespace crowdgame

#endif
