#ifndef CROWDGAME_ESS_HPP
#define CROWDGAME_ESS_HPP

#include "crowdgame/markov.hpp"
#include "crowdgame/regions.hpp"

#include <json.hpp>

#include <array>
#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace crowdgame {

enum class InvasionOutcome { Resists, Invaded, NeutrallyInvaded };

std::string_view to_string(InvasionOutcome o);

struct PairVerdict {
  InvasionOutcome outcome = InvasionOutcome::Resists;
  // An equality of eps-functions held at the query point but not at the
  // perturbed point, i.e. it may be a coincidence of this (d,q).
  bool degenerate = false;
};

struct EssVerdict {
  StrategyIndex candidate = 0;
  InvasionOutcome outcome = InvasionOutcome::Resists;
  std::optional<StrategyIndex> witness;
  bool degenerate = false;

  bool is_ess() const { return outcome == InvasionOutcome::Resists; }
};

enum class ScanMode { Exact, Screen };

struct ScanOptions {
  ScanMode mode = ScanMode::Screen;
  unsigned workers = 1;
  std::array<double, 2> screen_eps = {1e-3, 1e-4};
  double margin = 1e-7;
};

struct ScanStats {
  std::uint64_t float_pairs = 0;
  std::uint64_t exact_pairs = 0;
  // Float screen said "invaded" but the exact check disagreed.
  std::uint64_t screen_overruled = 0;
};

struct EssReport {
  Rational d;
  Rational q;
  std::vector<StrategyIndex> ess;
  std::vector<StrategyIndex> efficient;
  std::map<StrategyIndex, std::vector<Rational>> series;  // homogeneous payoff to eps^3
  RegionSet regions;
  bool degenerate = false;
  ScanStats stats;

  nlohmann::json to_json() const;
};

// Evaluates the two-tier invasion test at one (d,q) point for eps -> 0+.
// Exact payoffs come from a shared pair cache; the float screen is built
// lazily on first use.
class EssAnalyzer {
 public:
  EssAnalyzer(const Rational& d, const Rational& q, ScanOptions options = {},
              std::shared_ptr<ExactPairCache> cache = nullptr);

  const Params& params() const { return params_; }
  const ScanOptions& options() const { return options_; }

  // Does resident n resist invader m?
  PairVerdict exact_invasion(StrategyIndex n, StrategyIndex m);
  // Float verdict: nullopt when inside the margin or the two eps disagree.
  std::optional<InvasionOutcome> screen_invasion(StrategyIndex n, StrategyIndex m);

  EssVerdict is_ess(StrategyIndex n);
  EssReport scan();

  const EpsRationalFunction& homogeneous(StrategyIndex n);
  ScanStats stats() const;

 private:
  struct Point {
    Params params;
    std::vector<std::shared_ptr<const EpsRationalFunction>> homogeneous;
    std::mutex mu;
  };
  struct Screen {
    std::vector<FloatChainSolver> solvers;
    std::array<double, kNumChainStates> stage{};
    std::vector<std::array<double, 2>> homogeneous;
  };

  const EpsRationalFunction& homogeneous_at(Point& pt, StrategyIndex n);
  Sign compare_at(Point& pt, StrategyIndex a_player, StrategyIndex a_opp, StrategyIndex b_player,
                  StrategyIndex b_opp);
  const Screen& screen();

  Params params_;
  ScanOptions options_;
  std::shared_ptr<ExactPairCache> cache_;
  std::unique_ptr<Point> point_;
  std::unique_ptr<Point> perturbed_;
  std::once_flag screen_once_;
  std::unique_ptr<Screen> screen_;
  std::atomic<std::uint64_t> float_pairs_{0}, exact_pairs_{0}, overruled_{0};
};

EssVerdict is_ess(StrategyIndex n, const Rational& d, const Rational& q, const ScanOptions& options = {});
EssReport scan_all_ess(const Rational& d, const Rational& q, const ScanOptions& options = {},
                       std::shared_ptr<ExactPairCache> cache = nullptr);

// ESSs whose homogeneous payoff is maximal near eps = 0, ties included.
std::vector<StrategyIndex> efficient_subset(const EssReport& report, ExactPairCache* cache = nullptr);

// One error-perturbed round, four pure strategies.
std::array<std::array<EpsPolynomial, 4>, 4> single_shot_payoffs(const Params& p);
std::vector<SelectedAction> single_shot_ess(const Rational& d, const Rational& q);

// In region A the game between strategy 14 and uncond-CA is a prisoner's
// dilemma. Throws std::domain_error outside region A.
bool pd_reduction_check(const Rational& d, const Rational& q);

// Deterministic nearby point used to tell genuine eps-function equalities
// from coincidences of a particular (d,q).
std::pair<Rational, Rational> perturbed_point(const Rational& d, const Rational& q);

}  // namespace crowdgame

#endif
