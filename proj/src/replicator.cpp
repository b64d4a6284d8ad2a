#include "crowdgame/replicator.hpp"

#include "crowdgame/markov.hpp"
#include "crowdgame/regions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace crowdgame {

namespace {

void check_square(const PayoffMatrix& payoff, std::size_t n) {
  if (payoff.size() != n) throw std::invalid_argument("payoff matrix size does not match state");
  for (const auto& row : payoff) {
    if (row.size() != n) throw std::invalid_argument("payoff matrix is not square");
  }
}

std::vector<double> payoffs_against(std::span<const double> x, const PayoffMatrix& payoff) {
  std::vector<double> pi(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) pi[i] += payoff[i][j] * x[j];
  }
  return pi;
}

// Growth rates of log-frequencies: pi_i - mean.
std::vector<double> log_rates(std::span<const double> x, const PayoffMatrix& payoff) {
  auto pi = payoffs_against(x, payoff);
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean += x[i] * pi[i];
  for (auto& v : pi) v -= mean;
  return pi;
}

// z holds log-frequencies; shift so that they describe a normalized state.
std::vector<double> to_state(std::vector<double>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - top);
  const double shift = top + std::log(sum);
  std::vector<double> x(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] -= shift;
    x[i] = std::exp(z[i]);
  }
  return x;
}

}  // namespace

std::vector<double> replicator_rhs(std::span<const double> x, const PayoffMatrix& payoff) {
  check_square(payoff, x.size());
  auto rates = log_rates(x, payoff);
  for (std::size_t i = 0; i < x.size(); ++i) rates[i] *= x[i];
  return rates;
}

// RK4 on z = log x. Frequencies of losing strategies decay exponentially, which
// is linear in z, and the step follows the payoff gaps of the strategies that
// still matter, so slow order-eps competitions finish in a bounded step count.
Absorption integrate_to_absorption(std::span<const double> x0, const PayoffMatrix& payoff,
                                   const IntegrationOptions& options) {
  const std::size_t k = x0.size();
  check_square(payoff, k);
  for (double v : x0) {
    if (!(v > 0.0)) throw std::invalid_argument("initial state must be interior");
  }
  std::vector<double> z(k);
  for (std::size_t i = 0; i < k; ++i) z[i] = std::log(x0[i]);
  auto x = to_state(z);

  Absorption out;
  for (; out.steps < options.max_steps; ++out.steps) {
    for (std::size_t i = 0; i < k; ++i) {
      if (x[i] >= options.threshold) {
        out.winner = i;
        return out;
      }
    }
    const auto r1 = log_rates(x, payoff);
    std::vector<bool> active(k);
    for (std::size_t i = 0; i < k; ++i) active[i] = x[i] >= options.extinct || r1[i] > 0.0;
    double spread = 0.0, fastest = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!active[i]) continue;
      fastest = std::max(fastest, std::abs(r1[i]));
      for (std::size_t j = 0; j < k; ++j) {
        if (!active[j]) continue;
        for (std::size_t c = 0; c < k; ++c) {
          if (active[c]) spread = std::max(spread, std::abs(payoff[i][c] - payoff[j][c]));
        }
      }
    }
    if (spread == 0.0 || fastest < 1e-15) {
      out.stalled = true;
      return out;
    }
    const double h = options.step_scale / spread;

    auto stage = [&](const std::vector<double>& base, const std::vector<double>& slope, double t) {
      std::vector<double> zz(k);
      for (std::size_t i = 0; i < k; ++i) zz[i] = base[i] + t * slope[i];
      return log_rates(to_state(zz), payoff);
    };
    const auto r2 = stage(z, r1, h / 2);
    const auto r3 = stage(z, r2, h / 2);
    const auto r4 = stage(z, r3, h);
    for (std::size_t i = 0; i < k; ++i) z[i] += h / 6 * (r1[i] + 2 * r2[i] + 2 * r3[i] + r4[i]);
    x = to_state(z);
    if (options.observer) options.observer(x);
  }
  return out;
}

PayoffMatrix payoff_matrix_float(std::span<const StrategyIndex> strategies, const Params& p, double eps) {
  FloatChainSolver solver(eps);
  const auto stage = stage_payoff_vector_float(p);
  const std::size_t k = strategies.size();
  PayoffMatrix out(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      auto [a, b] = solver.payoffs(strategies[i], strategies[j], stage);
      out[i][j] = a;
      out[j][i] = b;
    }
  }
  return out;
}

double basin_two(double p11, double p12, double p21, double p22) {
  const double den = p11 + p22 - p12 - p21;
  if (!(den > 0.0)) throw NotBistable("pair is not bistable: p11 + p22 - p12 - p21 <= 0");
  const double share = (p11 - p21) / den;
  if (!(share > 0.0 && share < 1.0)) throw NotBistable("pair is not bistable: basin share outside (0,1)");
  return share;
}

double basin_two(StrategyIndex n1, StrategyIndex n2, const Rational& d, const Rational& q, double eps) {
  Params p{d, q};
  p.validate();
  const std::array<StrategyIndex, 2> s{n1, n2};
  const auto m = payoff_matrix_float(s, p, eps);
  return basin_two(m[0][0], m[0][1], m[1][0], m[1][1]);
}

BasinResult basin_three(const PayoffMatrix& payoff, int divisions, unsigned workers,
                        const IntegrationOptions& options) {
  check_square(payoff, 3);
  if (divisions < 3) throw std::invalid_argument("need at least 3 divisions");
  if (workers == 0) throw std::invalid_argument("worker count must be at least 1");

  std::vector<std::array<int, 2>> starts;
  for (int a = 1; a <= divisions - 2; ++a) {
    for (int b = 1; a + b <= divisions - 1; ++b) starts.push_back({a, b});
  }
  std::vector<int> winner(starts.size(), -1);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < starts.size(); i = next++) {
      const auto [a, b] = starts[i];
      const double x0[3] = {double(a) / divisions, double(b) / divisions, double(divisions - a - b) / divisions};
      const auto r = integrate_to_absorption(x0, payoff, options);
      if (r.winner) winner[i] = static_cast<int>(*r.winner);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  BasinResult out;
  out.divisions = divisions;
  out.total = starts.size();
  out.count.assign(3, 0);
  for (int w : winner) {
    if (w < 0) {
      ++out.unresolved;
    } else {
      ++out.count[static_cast<std::size_t>(w)];
    }
  }
  for (auto c : out.count) out.share.push_back(double(c) / double(out.total));
  return out;
}

BasinResult basin_three(const std::array<StrategyIndex, 3>& strategies, const Rational& d, const Rational& q,
                        double eps, int divisions, unsigned workers) {
  Params p{d, q};
  p.validate();
  auto out = basin_three(payoff_matrix_float(strategies, p, eps), divisions, workers);
  out.strategies.assign(strategies.begin(), strategies.end());
  out.d = d;
  out.q = q;
  out.eps = eps;
  return out;
}

BasinResult basins_at(const Rational& d, const Rational& q, double eps, int divisions, unsigned workers) {
  const auto regions = region_labels(d, q);
  if (!regions.contains(Region::A) || regions.on_boundary) {
    throw std::domain_error("point is outside region (A)");
  }
  const auto ess = predicted_ess(regions);
  if (ess.size() == 3) return basin_three({ess[0], ess[1], ess[2]}, d, q, eps, divisions, workers);
  if (ess.size() != 2) throw std::logic_error("unexpected number of coexisting strategies");

  BasinResult out;
  out.strategies = ess;
  out.d = d;
  out.q = q;
  out.eps = eps;
  const double s = basin_two(ess[0], ess[1], d, q, eps);
  out.share = {s, 1.0 - s};
  return out;
}

}  // namespace crowdgame
