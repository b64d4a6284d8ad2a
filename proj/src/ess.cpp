#include "crowdgame/ess.hpp"

#include <algorithm>
#include <thread>

namespace crowdgame {

namespace {

// Catalog strategies first: they are the usual invaders.
const std::vector<StrategyIndex>& invader_order() {
  static const std::vector<StrategyIndex> order = [] {
    std::vector<StrategyIndex> out;
    std::vector<bool> seen(kNumStrategies, false);
    for (const auto& e : catalog()) {
      out.push_back(e.index());
      seen[e.index()] = true;
    }
    for (std::size_t i = 0; i < kNumStrategies; ++i) {
      if (!seen[i]) out.push_back(static_cast<StrategyIndex>(i));
    }
    return out;
  }();
  return order;
}

Params make_params(const Rational& d, const Rational& q) {
  Params p{d, q};
  p.validate();
  return p;
}

}  // namespace

std::string_view to_string(InvasionOutcome o) {
  switch (o) {
    case InvasionOutcome::Resists: return "ESS";
    case InvasionOutcome::Invaded: return "invaded";
    case InvasionOutcome::NeutrallyInvaded: return "neutrally-invaded";
  }
  return "?";
}

std::pair<Rational, Rational> perturbed_point(const Rational& d, const Rational& q) {
  const Rational dd(1, 257), dq(1, 263);
  Rational d2 = d + dd < 1 ? Rational(d + dd) : Rational(d - dd);
  Rational q2 = q + dq < 1 ? Rational(q + dq) : Rational(q - dq);
  return {d2, q2};
}

EssAnalyzer::EssAnalyzer(const Rational& d, const Rational& q, ScanOptions options,
                         std::shared_ptr<ExactPairCache> cache)
    : params_(make_params(d, q)),
      options_(options),
      cache_(cache ? std::move(cache) : std::make_shared<ExactPairCache>()),
      point_(std::make_unique<Point>()),
      perturbed_(std::make_unique<Point>()) {
  if (options_.workers == 0) throw std::invalid_argument("worker count must be at least 1");
  point_->params = params_;
  point_->homogeneous.resize(kNumStrategies);
  auto [d2, q2] = perturbed_point(d, q);
  perturbed_->params = Params{d2, q2};
  perturbed_->homogeneous.resize(kNumStrategies);
}

const EpsRationalFunction& EssAnalyzer::homogeneous_at(Point& pt, StrategyIndex n) {
  {
    std::lock_guard lock(pt.mu);
    if (pt.homogeneous[n]) return *pt.homogeneous[n];
  }
  auto value = std::make_shared<const EpsRationalFunction>(cache_->homogeneous(n, pt.params));
  std::lock_guard lock(pt.mu);
  if (!pt.homogeneous[n]) pt.homogeneous[n] = std::move(value);
  return *pt.homogeneous[n];
}

const EpsRationalFunction& EssAnalyzer::homogeneous(StrategyIndex n) { return homogeneous_at(*point_, n); }

PairVerdict EssAnalyzer::exact_invasion(StrategyIndex n, StrategyIndex m) {
  ++exact_pairs_;
  const auto& hn = homogeneous_at(*point_, n);
  const auto& hm = homogeneous_at(*point_, m);
  const auto [p_nm, p_mn] = cache_->payoffs(n, m, params_);

  auto decide = [](Sign s) {
    return s == Sign::Positive ? InvasionOutcome::Resists : InvasionOutcome::Invaded;
  };
  PairVerdict v;
  const Sign first = compare_small_eps(hn, p_mn);
  if (first != Sign::Zero) {
    v.outcome = decide(first);
    return v;
  }
  const auto [q_nm, q_mn] = cache_->payoffs(n, m, perturbed_->params);
  if (compare_small_eps(homogeneous_at(*perturbed_, n), q_mn) != Sign::Zero) v.degenerate = true;

  const Sign second = compare_small_eps(p_nm, hm);
  if (second != Sign::Zero) {
    v.outcome = decide(second);
    return v;
  }
  if (compare_small_eps(q_nm, homogeneous_at(*perturbed_, m)) != Sign::Zero) v.degenerate = true;
  v.outcome = InvasionOutcome::NeutrallyInvaded;
  return v;
}

const EssAnalyzer::Screen& EssAnalyzer::screen() {
  std::call_once(screen_once_, [this] {
    auto s = std::make_unique<Screen>();
    s->stage = stage_payoff_vector_float(params_);
    for (double eps : options_.screen_eps) s->solvers.emplace_back(eps);
    s->homogeneous.resize(kNumStrategies);
    for (std::size_t n = 0; n < kNumStrategies; ++n) {
      for (std::size_t k = 0; k < s->solvers.size(); ++k) {
        try {
          const auto i = static_cast<StrategyIndex>(n);
          s->homogeneous[n][k] = s->solvers[k].payoffs(i, i, s->stage).first;
        } catch (const NumericalFailure&) {
          s->homogeneous[n][k] = std::numeric_limits<double>::quiet_NaN();
        }
      }
    }
    screen_ = std::move(s);
  });
  return *screen_;
}

std::optional<InvasionOutcome> EssAnalyzer::screen_invasion(StrategyIndex n, StrategyIndex m) {
  const Screen& s = screen();
  ++float_pairs_;
  int pos = 0, neg = 0;
  for (std::size_t k = 0; k < s.solvers.size(); ++k) {
    double invader;
    try {
      invader = s.solvers[k].payoffs(n, m, s.stage).second;
    } catch (const NumericalFailure&) {
      return std::nullopt;
    }
    const double diff = s.homogeneous[n][k] - invader;
    if (diff > options_.margin) {
      ++pos;
    } else if (diff < -options_.margin) {
      ++neg;
    }
  }
  const int total = static_cast<int>(s.solvers.size());
  if (pos == total) return InvasionOutcome::Resists;
  if (neg == total) return InvasionOutcome::Invaded;
  return std::nullopt;
}

EssVerdict EssAnalyzer::is_ess(StrategyIndex n) {
  EssVerdict verdict;
  verdict.candidate = n;
  auto fail = [&](StrategyIndex m, const PairVerdict& pv) {
    verdict.outcome = pv.outcome;
    verdict.witness = m;
    verdict.degenerate = verdict.degenerate || pv.degenerate;
    return verdict;
  };

  const auto& order = invader_order();
  if (options_.mode == ScanMode::Exact) {
    for (auto m : order) {
      if (m == n) continue;
      const auto pv = exact_invasion(n, m);
      if (pv.outcome != InvasionOutcome::Resists) return fail(m, pv);
      verdict.degenerate = verdict.degenerate || pv.degenerate;
    }
    return verdict;
  }

  std::vector<bool> confirmed(kNumStrategies, false);
  std::vector<StrategyIndex> ambiguous;
  for (auto m : order) {
    if (m == n) continue;
    const auto screened = screen_invasion(n, m);
    if (!screened) {
      ambiguous.push_back(m);
    } else if (*screened == InvasionOutcome::Invaded) {
      const auto pv = exact_invasion(n, m);
      confirmed[m] = true;
      if (pv.outcome != InvasionOutcome::Resists) return fail(m, pv);
      ++overruled_;
      verdict.degenerate = verdict.degenerate || pv.degenerate;
    }
  }
  for (auto m : ambiguous) {
    const auto pv = exact_invasion(n, m);
    confirmed[m] = true;
    if (pv.outcome != InvasionOutcome::Resists) return fail(m, pv);
    verdict.degenerate = verdict.degenerate || pv.degenerate;
  }
  // No invader survived the screen: certify every pair exactly.
  for (auto m : order) {
    if (m == n || confirmed[m]) continue;
    const auto pv = exact_invasion(n, m);
    if (pv.outcome != InvasionOutcome::Resists) return fail(m, pv);
    verdict.degenerate = verdict.degenerate || pv.degenerate;
  }
  return verdict;
}

ScanStats EssAnalyzer::stats() const { return {float_pairs_.load(), exact_pairs_.load(), overruled_.load()}; }

EssReport EssAnalyzer::scan() {
  std::vector<EssVerdict> verdicts(kNumStrategies);
  if (options_.mode == ScanMode::Screen) screen();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t n = next++; n < kNumStrategies; n = next++) {
      verdicts[n] = is_ess(static_cast<StrategyIndex>(n));
    }
  };
  if (options_.workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < options_.workers; ++w) pool.emplace_back(work);
  }

  EssReport report;
  report.d = params_.d;
  report.q = params_.q;
  report.regions = region_labels(params_.d, params_.q);
  for (const auto& v : verdicts) {
    if (v.is_ess()) report.ess.push_back(v.candidate);
    report.degenerate = report.degenerate || v.degenerate;
  }
  report.efficient = efficient_subset(report, cache_.get());
  for (auto n : report.ess) report.series[n] = homogeneous(n).taylor(3);
  report.stats = stats();
  return report;
}

EssVerdict is_ess(StrategyIndex n, const Rational& d, const Rational& q, const ScanOptions& options) {
  EssAnalyzer analyzer(d, q, options);
  return analyzer.is_ess(n);
}

EssReport scan_all_ess(const Rational& d, const Rational& q, const ScanOptions& options,
                       std::shared_ptr<ExactPairCache> cache) {
  EssAnalyzer analyzer(d, q, options, std::move(cache));
  return analyzer.scan();
}

std::vector<StrategyIndex> efficient_subset(const EssReport& report, ExactPairCache* cache) {
  ExactPairCache local;
  if (!cache) cache = &local;
  const Params p{report.d, report.q};
  std::vector<EpsRationalFunction> values;
  for (auto n : report.ess) values.push_back(cache->homogeneous(n, p));
  std::vector<StrategyIndex> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool best = true;
    for (std::size_t j = 0; j < values.size() && best; ++j) {
      if (i != j && compare_small_eps(values[i], values[j]) == Sign::Negative) best = false;
    }
    if (best) out.push_back(report.ess[i]);
  }
  return out;
}

std::array<std::array<EpsPolynomial, 4>, 4> single_shot_payoffs(const Params& p) {
  std::array<std::array<EpsPolynomial, 4>, 4> m;
  const auto stage = stage_payoff_vector(p);
  for (auto a : kSelectedActions) {
    const auto ea = error_distribution_poly(a);
    for (auto b : kSelectedActions) {
      const auto eb = error_distribution_poly(b);
      EpsPolynomial acc;
      for (auto a2 : kSelectedActions) {
        for (auto b2 : kSelectedActions) {
          acc += ea[static_cast<std::size_t>(a2)] * eb[static_cast<std::size_t>(b2)] *
                 stage[index_of(realize(a2, b2))];
        }
      }
      m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = std::move(acc);
    }
  }
  return m;
}

std::vector<SelectedAction> single_shot_ess(const Rational& d, const Rational& q) {
  const auto m = single_shot_payoffs(make_params(d, q));
  auto f = [&](std::size_t i, std::size_t j) { return EpsRationalFunction(m[i][j]); };
  std::vector<SelectedAction> out;
  for (std::size_t n = 0; n < 4; ++n) {
    bool stable = true;
    for (std::size_t k = 0; k < 4 && stable; ++k) {
      if (k == n) continue;
      Sign s = compare_small_eps(f(n, n), f(k, n));
      if (s == Sign::Zero) s = compare_small_eps(f(n, k), f(k, k));
      stable = s == Sign::Positive;
    }
    if (stable) out.push_back(static_cast<SelectedAction>(n));
  }
  return out;
}

bool pd_reduction_check(const Rational& d, const Rational& q) {
  if (!region_labels(d, q).contains(Region::A)) throw std::domain_error("point is outside region A");
  const Rational half(1, 2);
  const Rational temptation = 1 - d, reward = half, punishment = half - q, sucker = d - q;
  return temptation > reward && reward > punishment && punishment > sucker && 2 * reward > temptation + sucker;
}

nlohmann::json EssReport::to_json() const {
  nlohmann::json j;
  j["d"] = crowdgame::to_string(d);
  j["q"] = crowdgame::to_string(q);
  j["ess"] = ess;
  j["efficient"] = efficient;
  j["regions"] = regions.labels();
  j["on_boundary"] = regions.on_boundary;
  j["degenerate"] = degenerate;
  nlohmann::json strategies = nlohmann::json::array();
  for (auto n : ess) {
    nlohmann::json e;
    e["index"] = n;
    e["table"] = decode(n).to_string();
    if (auto c = catalog_number(n)) e["catalog"] = *c;
    std::vector<std::string> s;
    if (auto it = series.find(n); it != series.end()) {
      for (const auto& c : it->second) s.push_back(crowdgame::to_string(c));
    }
    e["series"] = s;
    strategies.push_back(e);
  }
  j["strategies"] = strategies;
  j["stats"] = {{"float_pairs", stats.float_pairs},
                {"exact_pairs", stats.exact_pairs},
                {"screen_overruled", stats.screen_overruled}};
  return j;
}

}  // namespace crowdgame
