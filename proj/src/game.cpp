#include "crowdgame/game.hpp"

#include <random>
#include <stdexcept>

namespace crowdgame {

namespace {

struct StateInfo {
  RealizedAction p1, p2;
};

constexpr std::array<StateInfo, kNumChainStates> kStateInfo = {{
    {RealizedAction::CA, RealizedAction::CA},
    {RealizedAction::CA, RealizedAction::CN},
    {RealizedAction::CN, RealizedAction::CA},
    {RealizedAction::CN, RealizedAction::CN},
    {RealizedAction::CStar, RealizedAction::SA},
    {RealizedAction::CStar, RealizedAction::SN},
    {RealizedAction::SA, RealizedAction::CStar},
    {RealizedAction::SN, RealizedAction::CStar},
    {RealizedAction::SStar, RealizedAction::SStar},
}};

bool realized_crowdsourced(RealizedAction a) {
  return a == RealizedAction::CA || a == RealizedAction::CN || a == RealizedAction::CStar;
}

bool realized_attacked(RealizedAction a) { return a == RealizedAction::CA || a == RealizedAction::SA; }

}  // namespace

std::string_view to_string(SelectedAction a) {
  switch (a) {
    case SelectedAction::CA: return "CA";
    case SelectedAction::CN: return "CN";
    case SelectedAction::SA: return "SA";
    case SelectedAction::SN: return "SN";
  }
  return "?";
}

std::string_view to_string(RealizedAction a) {
  switch (a) {
    case RealizedAction::CA: return "CA";
    case RealizedAction::CN: return "CN";
    case RealizedAction::CStar: return "C*";
    case RealizedAction::SA: return "SA";
    case RealizedAction::SN: return "SN";
    case RealizedAction::SStar: return "S*";
  }
  return "?";
}

std::optional<SelectedAction> parse_selected_action(std::string_view s) {
  for (auto a : kSelectedActions) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<RealizedAction> parse_realized_action(std::string_view s) {
  for (auto a : kRealizedActions) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

RealizedAction first(ChainState s) { return kStateInfo[index_of(s)].p1; }
RealizedAction second(ChainState s) { return kStateInfo[index_of(s)].p2; }

std::optional<ChainState> make_chain_state(RealizedAction p1, RealizedAction p2) {
  for (auto s : kChainStates) {
    if (first(s) == p1 && second(s) == p2) return s;
  }
  return std::nullopt;
}

ChainState mirror(ChainState s) {
  static constexpr std::array<std::uint8_t, kNumChainStates> kMirror = {0, 2, 1, 3, 6, 7, 4, 5, 8};
  return static_cast<ChainState>(kMirror[index_of(s)]);
}

std::string to_string(ChainState s) {
  return "(" + std::string(to_string(first(s))) + "," + std::string(to_string(second(s))) + ")";
}

void Params::validate() const {
  if (d <= 0 || d >= 1) throw std::invalid_argument("d must lie in (0,1)");
  if (q <= 0 || q >= 1) throw std::invalid_argument("q must lie in (0,1)");
  if (!(epsilon >= 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in [0,1/2)");
}

ChainState realize(SelectedAction a1, SelectedAction a2) {
  const bool c1 = crowdsources(a1), c2 = crowdsources(a2);
  if (c1 && c2) {
    return *make_chain_state(attacks(a1) ? RealizedAction::CA : RealizedAction::CN,
                             attacks(a2) ? RealizedAction::CA : RealizedAction::CN);
  }
  if (c1) return attacks(a2) ? ChainState::CStar_SA : ChainState::CStar_SN;
  if (c2) return attacks(a1) ? ChainState::SA_CStar : ChainState::SN_CStar;
  return ChainState::SStar_SStar;
}

Rational stage_payoff(ChainState s, const Params& p) {
  const Rational half(1, 2);
  const Rational survive = (1 - p.d) * (1 - p.d);
  switch (s) {
    case ChainState::CA_CA: return half - p.q;
    case ChainState::CA_CN: return 1 - half * survive - p.q;
    case ChainState::CN_CA: return half * survive;
    case ChainState::CN_CN: return half;
    case ChainState::CStar_SA: return 1 - p.d;
    case ChainState::CStar_SN: return Rational(1);
    case ChainState::SA_CStar: return p.d - p.q;
    case ChainState::SN_CStar: return Rational(0);
    case ChainState::SStar_SStar: return half;
  }
  throw std::logic_error("invalid chain state");
}

std::array<Rational, kNumChainStates> stage_payoff_vector(const Params& p) {
  std::array<Rational, kNumChainStates> v;
  for (auto s : kChainStates) v[index_of(s)] = stage_payoff(s, p);
  return v;
}

double stage_payoff_float(ChainState s, double d, double q) {
  Params p{Rational(d), Rational(q)};
  return stage_payoff(s, p).get_d();
}

double stage_payoff_oracle(ChainState s, double d, double q, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("samples must be positive");
  const RealizedAction r1 = first(s), r2 = second(s);
  const bool c1 = realized_crowdsourced(r1), c2 = realized_crowdsourced(r2);
  // An attack only lands on a crowdsourcer, which is exactly when it shows.
  const bool hit1 = realized_attacked(r2), hit2 = realized_attacked(r1);
  const double cost = realized_attacked(r1) ? q : 0.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double wins = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    double p1 = c1 ? unif(rng) : 0.0;
    double p2 = c2 ? unif(rng) : 0.0;
    if (hit1) p1 -= d;
    if (hit2) p2 -= d;
    if (p1 > p2) {
      wins += 1.0;
    } else if (p1 == p2) {
      wins += 0.5;
    }
  }
  return wins / static_cast<double>(samples) - cost;
}

std::array<double, 4> error_distribution(SelectedAction intended, double eps) {
  std::array<double, 4> out{};
  for (auto a : kSelectedActions) {
    const int flips = (crowdsources(a) != crowdsources(intended)) + (attacks(a) != attacks(intended));
    double p = 1.0;
    for (int k = 0; k < 2; ++k) p *= (k < flips) ? eps : (1.0 - eps);
    out[static_cast<std::size_t>(a)] = p;
  }
  return out;
}

std::array<EpsPolynomial, 4> error_distribution_poly(SelectedAction intended) {
  const EpsPolynomial e{Rational(0), Rational(1)};
  const EpsPolynomial keep{Rational(1), Rational(-1)};
  std::array<EpsPolynomial, 4> out;
  for (auto a : kSelectedActions) {
    const int flips = (crowdsources(a) != crowdsources(intended)) + (attacks(a) != attacks(intended));
    EpsPolynomial p = EpsPolynomial::constant(1);
    for (int k = 0; k < 2; ++k) p = p * ((k < flips) ? e : keep);
    out[static_cast<std::size_t>(a)] = p;
  }
  return out;
}

}  // namespace crowdgame
