#ifndef CROWDGAME_GAME_HPP
#define CROWDGAME_GAME_HPP

#include "crowdgame/eps_poly.hpp"
#include "crowdgame/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace crowdgame {

// Intended action of one round: crowdsource (C) or solo (S), crossed with
// attack (A) or no attack (N). Values double as base-4 strategy digits.
enum class SelectedAction : std::uint8_t { CA = 0, CN = 1, SA = 2, SN = 3 };

// What the opponent observes. The starred actions hide the attack intent,
// which is only revealed when the opponent crowdsources.
enum class RealizedAction : std::uint8_t { CA = 0, CN = 1, CStar = 2, SA = 3, SN = 4, SStar = 5 };

inline constexpr std::array<SelectedAction, 4> kSelectedActions = {SelectedAction::CA, SelectedAction::CN,
                                                                   SelectedAction::SA, SelectedAction::SN};
inline constexpr std::array<RealizedAction, 6> kRealizedActions = {
    RealizedAction::CA, RealizedAction::CN, RealizedAction::CStar,
    RealizedAction::SA, RealizedAction::SN, RealizedAction::SStar};

constexpr bool crowdsources(SelectedAction a) { return a == SelectedAction::CA || a == SelectedAction::CN; }
constexpr bool attacks(SelectedAction a) { return a == SelectedAction::CA || a == SelectedAction::SA; }
constexpr SelectedAction make_action(bool crowdsource, bool attack) {
  return static_cast<SelectedAction>((crowdsource ? 0 : 2) + (attack ? 0 : 1));
}

std::string_view to_string(SelectedAction a);
std::string_view to_string(RealizedAction a);
std::optional<SelectedAction> parse_selected_action(std::string_view s);
std::optional<RealizedAction> parse_realized_action(std::string_view s);

// The nine realizable pairs (player 1, player 2), in canonical chain order.
enum class ChainState : std::uint8_t {
  CA_CA = 0,
  CA_CN,
  CN_CA,
  CN_CN,
  CStar_SA,
  CStar_SN,
  SA_CStar,
  SN_CStar,
  SStar_SStar,
};

inline constexpr std::size_t kNumChainStates = 9;
inline constexpr std::array<ChainState, kNumChainStates> kChainStates = {
    ChainState::CA_CA,    ChainState::CA_CN,    ChainState::CN_CA,
    ChainState::CN_CN,    ChainState::CStar_SA, ChainState::CStar_SN,
    ChainState::SA_CStar, ChainState::SN_CStar, ChainState::SStar_SStar};

RealizedAction first(ChainState s);
RealizedAction second(ChainState s);
std::optional<ChainState> make_chain_state(RealizedAction p1, RealizedAction p2);
// Same round seen from player 2's side.
ChainState mirror(ChainState s);
std::string to_string(ChainState s);

inline std::size_t index_of(ChainState s) { return static_cast<std::size_t>(s); }

// Game parameters. d and q are exact; epsilon is only consulted by the
// floating-point paths (the exact paths keep eps symbolic).
struct Params {
  Rational d;
  Rational q;
  double epsilon = 0.0;

  // Throws std::invalid_argument unless 0 < d, q < 1 and 0 <= epsilon < 1/2.
  void validate() const;
  double d_value() const { return d.get_d(); }
  double q_value() const { return q.get_d(); }
};

// Deterministic map from the two selected actions to the realized pair.
ChainState realize(SelectedAction a1, SelectedAction a2);

// Expected per-round payoff to player 1 in a realized pair.
Rational stage_payoff(ChainState s, const Params& p);
std::array<Rational, kNumChainStates> stage_payoff_vector(const Params& p);
double stage_payoff_float(ChainState s, double d, double q);

// Monte Carlo estimate of stage_payoff from sampled productivities.
double stage_payoff_oracle(ChainState s, double d, double q, std::uint64_t samples, std::uint64_t seed);

// Probability of executing each action (indexed by SelectedAction) when
// intending `intended`: eps^h (1-eps)^(2-h), h = number of flipped bits.
std::array<double, 4> error_distribution(SelectedAction intended, double eps);
std::array<EpsPolynomial, 4> error_distribution_poly(SelectedAction intended);

}  // namespace crowdgame

#endif
