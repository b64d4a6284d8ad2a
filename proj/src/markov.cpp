#include "crowdgame/markov.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace crowdgame {

namespace {

using Rows = std::array<std::array<std::array<IntegerPoly, kNumChainStates>, 4>, 4>;

IntegerPoly to_integer_poly(const EpsPolynomial& p) {
  IntegerPoly out;
  for (const auto& c : p.coefficients()) {
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) throw std::logic_error("non-integer transition coefficient");
    out.push_back(c.get_num().get_si());
  }
  return out;
}

Rows make_rows() {
  Rows rows;
  for (auto a1 : kSelectedActions) {
    for (auto a2 : kSelectedActions) {
      const auto e1 = error_distribution_poly(a1);
      const auto e2 = error_distribution_poly(a2);
      std::array<EpsPolynomial, kNumChainStates> acc;
      for (auto b1 : kSelectedActions) {
        for (auto b2 : kSelectedActions) {
          acc[index_of(realize(b1, b2))] += e1[static_cast<std::size_t>(b1)] * e2[static_cast<std::size_t>(b2)];
        }
      }
      auto& row = rows[static_cast<std::size_t>(a1)][static_cast<std::size_t>(a2)];
      for (std::size_t s = 0; s < kNumChainStates; ++s) row[s] = to_integer_poly(acc[s]);
    }
  }
  return rows;
}

const Rows& rows() {
  static const Rows r = make_rows();
  return r;
}

std::array<Rational, kNumChainStates> mirrored(const std::array<Rational, kNumChainStates>& v) {
  std::array<Rational, kNumChainStates> out;
  for (auto s : kChainStates) out[index_of(s)] = v[index_of(mirror(s))];
  return out;
}

std::uint32_t pair_key(StrategyIndex lo, StrategyIndex hi) { return (static_cast<std::uint32_t>(lo) << 12) | hi; }

}  // namespace

std::pair<SelectedAction, SelectedAction> intended_actions(const ReactiveStrategy& n, const ReactiveStrategy& m,
                                                           ChainState s) {
  return {n.respond(second(s)), m.respond(first(s))};
}

const std::array<IntegerPoly, kNumChainStates>& transition_row(SelectedAction a1, SelectedAction a2) {
  return rows()[static_cast<std::size_t>(a1)][static_cast<std::size_t>(a2)];
}

IntegerPolyMatrix build_transition_integer(StrategyIndex n, StrategyIndex m) {
  const auto sn = decode(n), sm = decode(m);
  IntegerPolyMatrix t;
  t.reserve(kNumChainStates);
  for (auto s : kChainStates) {
    auto [a1, a2] = intended_actions(sn, sm, s);
    const auto& row = transition_row(a1, a2);
    t.emplace_back(row.begin(), row.end());
  }
  return t;
}

EpsPolyMatrix build_transition_exact(StrategyIndex n, StrategyIndex m) {
  const auto ti = build_transition_integer(n, m);
  EpsPolyMatrix t(kNumChainStates);
  for (std::size_t i = 0; i < kNumChainStates; ++i) {
    for (const auto& p : ti[i]) {
      std::vector<Rational> c;
      for (auto v : p) c.emplace_back(static_cast<long>(v));
      t[i].emplace_back(std::move(c));
    }
  }
  return t;
}

FloatMatrix build_transition_float(StrategyIndex n, StrategyIndex m, double eps) {
  return FloatChainSolver(eps).transition(n, m);
}

StationaryWeights stationary_exact(StrategyIndex n, StrategyIndex m) {
  return solve_stationary_exact(build_transition_integer(n, m));
}

FloatDistribution stationary_float(StrategyIndex n, StrategyIndex m, double eps) {
  return FloatChainSolver(eps).stationary(n, m);
}

EpsRationalFunction average_payoff_exact(StrategyIndex n, StrategyIndex m, const Params& p) {
  const auto w = stationary_exact(n, m);
  const auto v = stage_payoff_vector(p);
  return w.expectation(v);
}

double average_payoff_float(StrategyIndex n, StrategyIndex m, const Params& p, double eps) {
  return FloatChainSolver(eps).payoffs(n, m, stage_payoff_vector_float(p)).first;
}

PayoffResult average_payoff(StrategyIndex n, StrategyIndex m, Mode mode, const Params& p) {
  if (mode == Mode::Exact) return {n, m, p, average_payoff_exact(n, m, p)};
  return {n, m, p, average_payoff_float(n, m, p, p.epsilon)};
}

std::vector<Rational> payoff_series(StrategyIndex n, StrategyIndex m, const Params& p, int order) {
  return average_payoff_exact(n, m, p).taylor(order);
}

std::array<std::array<Rational, 4>, 4> selected_pair_limit(StrategyIndex n, StrategyIndex m) {
  const auto w = stationary_exact(n, m);
  const auto sn = decode(n), sm = decode(m);
  std::array<std::array<Rational, 4>, 4> out;
  for (auto& row : out) row.fill(Rational(0));
  for (auto s : kChainStates) {
    auto [a1, a2] = intended_actions(sn, sm, s);
    out[static_cast<std::size_t>(a1)][static_cast<std::size_t>(a2)] += w.probability(index_of(s)).limit();
  }
  return out;
}

std::shared_ptr<const StationaryWeights> ExactPairCache::canonical(StrategyIndex lo, StrategyIndex hi) {
  const auto key = pair_key(lo, hi);
  {
    std::lock_guard lock(mu_);
    if (auto it = map_.find(key); it != map_.end()) return it->second;
  }
  auto solved = std::make_shared<const StationaryWeights>(stationary_exact(lo, hi));
  std::lock_guard lock(mu_);
  ++solves_;
  if (map_.size() >= capacity_) map_.clear();
  map_[key] = solved;
  return solved;
}

std::pair<EpsRationalFunction, EpsRationalFunction> ExactPairCache::payoffs(StrategyIndex n, StrategyIndex m,
                                                                          const Params& p) {
  const bool swapped = n > m;
  const auto w = swapped ? canonical(m, n) : canonical(n, m);
  const auto v = stage_payoff_vector(p);
  const auto vm = mirrored(v);
  auto first_player = w->expectation(v);
  auto second_player = w->expectation(vm);
  if (swapped) return {second_player, first_player};
  return {first_player, second_player};
}

std::size_t ExactPairCache::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

std::size_t ExactPairCache::solves() const {
  std::lock_guard lock(mu_);
  return solves_;
}

FloatChainSolver::FloatChainSolver(double eps) : eps_(eps) {
  for (auto a1 : kSelectedActions) {
    for (auto a2 : kSelectedActions) {
      const auto e1 = error_distribution(a1, eps);
      const auto e2 = error_distribution(a2, eps);
      auto& row = rows_[static_cast<std::size_t>(a1)][static_cast<std::size_t>(a2)];
      row.fill(0.0);
      for (auto b1 : kSelectedActions) {
        for (auto b2 : kSelectedActions) {
          row[index_of(realize(b1, b2))] += e1[static_cast<std::size_t>(b1)] * e2[static_cast<std::size_t>(b2)];
        }
      }
    }
  }
}

FloatMatrix FloatChainSolver::transition(StrategyIndex n, StrategyIndex m) const {
  const auto sn = decode(n), sm = decode(m);
  FloatMatrix t;
  for (auto s : kChainStates) {
    auto [a1, a2] = intended_actions(sn, sm, s);
    t[index_of(s)] = rows_[static_cast<std::size_t>(a1)][static_cast<std::size_t>(a2)];
  }
  return t;
}

FloatDistribution FloatChainSolver::stationary(StrategyIndex n, StrategyIndex m) const {
  constexpr int N = kNumChainStates;
  const FloatMatrix t = transition(n, m);
  Eigen::Matrix<double, N, N> a;
  for (int j = 0; j < N - 1; ++j) {
    for (int i = 0; i < N; ++i) a(j, i) = t[i][j] - (i == j ? 1.0 : 0.0);
  }
  a.row(N - 1).setOnes();
  Eigen::Matrix<double, N, 1> b = Eigen::Matrix<double, N, 1>::Zero();
  b(N - 1) = 1.0;
  const auto lu = a.partialPivLu();
  // Pivots sit near eps/2 for these chains; a vanishing one means several
  // closed classes and no unique answer, even if the solve looks clean.
  for (int i = 0; i < N; ++i) {
    if (!(std::abs(lu.matrixLU()(i, i)) > 1e-14)) {
      throw NumericalFailure("chain has no unique stationary distribution");
    }
  }
  Eigen::Matrix<double, N, 1> x = lu.solve(b);

  double residual = std::abs(x.sum() - 1.0);
  for (int j = 0; j < N; ++j) {
    double flow = -x(j);
    for (int i = 0; i < N; ++i) flow += x(i) * t[i][j];
    residual = std::max(residual, std::abs(flow));
  }
  if (!(residual <= 1e-8)) {
    throw NumericalFailure("float stationary solve failed (residual " + std::to_string(residual) + ")");
  }
  FloatDistribution out;
  for (int i = 0; i < N; ++i) out[i] = x(i);
  return out;
}

std::pair<double, double> FloatChainSolver::payoffs(StrategyIndex n, StrategyIndex m,
                                                    const std::array<double, kNumChainStates>& stage) const {
  const auto x = stationary(n, m);
  double p1 = 0.0, p2 = 0.0;
  for (auto s : kChainStates) {
    p1 += x[index_of(s)] * stage[index_of(s)];
    p2 += x[index_of(s)] * stage[index_of(mirror(s))];
  }
  return {p1, p2};
}

std::array<double, kNumChainStates> stage_payoff_vector_float(const Params& p) {
  std::array<double, kNumChainStates> out;
  const auto v = stage_payoff_vector(p);
  for (std::size_t i = 0; i < kNumChainStates; ++i) out[i] = v[i].get_d();
  return out;
}

}  // namespace crowdgame
