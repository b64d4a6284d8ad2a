#ifndef CROWDGAME_VERIFY_HPP
#define CROWDGAME_VERIFY_HPP

#include "crowdgame/game.hpp"
#include "crowdgame/markov.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crowdgame {

struct CheckResult {
  explicit CheckResult(std::string check = {}) : name(std::move(check)) {}

  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  double seconds = 0.0;

  void fail(std::string what) {
    passed = false;
    failures.push_back(std::move(what));
  }
};

struct VerifyContext {
  unsigned workers = 1;
  std::shared_ptr<ExactPairCache> cache = std::make_shared<ExactPairCache>(1u << 16);
};

using StagePayoffFn = std::function<double(ChainState, double d, double q)>;

// Monte Carlo productivity draws against the closed-form stage payoffs on a
// 3x3 grid of (d,q), tolerance 3e-3 with 1e6 samples per state.
CheckResult check_stage_payoffs(const StagePayoffFn& closed_form = stage_payoff_float,
                                std::uint64_t samples = 1'000'000);
// Homogeneous payoff series to eps^3 of the 16 catalog strategies.
CheckResult check_payoff_series(VerifyContext& ctx);
// eps -> 0 distribution of selected actions in the homogeneous chains.
CheckResult check_stationary_limits(VerifyContext& ctx);
// Full ESS scans at one point per region, against the catalog's regions.
CheckResult check_ess_regions(VerifyContext& ctx);
CheckResult check_single_shot(VerifyContext& ctx);
CheckResult check_payoff_gaps(VerifyContext& ctx);
CheckResult check_sa_dwell(VerifyContext& ctx);
CheckResult check_basins_two(VerifyContext& ctx);
CheckResult check_basins_three(VerifyContext& ctx);
CheckResult check_properties(VerifyContext& ctx);

struct CheckSpec {
  std::string_view name;
  std::string_view summary;
  std::function<CheckResult(VerifyContext&)> run;
};

std::span<const CheckSpec> verification_checks();

// Runs the selected checks (all when only is empty), printing one line per
// check plus failure details. Returns true when all selected checks pass.
// Throws std::invalid_argument for an unknown check name.
bool run_verification(VerifyContext& ctx, const std::vector<std::string>& only, std::ostream& out);

// Regression baseline for the three-strategy basin check.
struct BasinBaseline {
  Rational d, q;
  double eps;
  std::array<StrategyIndex, 3> strategies;
  std::array<std::size_t, 3> counts;
};
const BasinBaseline& basin_baseline();

}  // namespace crowdgame

#endif
