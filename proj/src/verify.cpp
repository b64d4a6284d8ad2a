#include "crowdgame/verify.hpp"

#include "crowdgame/ess.hpp"
#include "crowdgame/regions.hpp"
#include "crowdgame/replicator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace crowdgame {

namespace {

struct SeriesRow {
  int number;
  // Coefficient of eps^k is terms[k][0] + terms[k][1] * q.
  std::array<std::array<const char*, 2>, 4> terms;
};

// Homogeneous payoffs of the catalog strategies to third order.
constexpr std::array<SeriesRow, 16> kSeries = {{
    {1, {{{"1/2", "-1"}, {"0", "2"}, {"0", "-1"}, {"0", "0"}}}},
    {2, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {3, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {4, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {5, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {6, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {7, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {8, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {9, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "0"}}}},
    {10, {{{"1/2", "0"}, {"0", "-1"}, {"0", "1"}, {"0", "-2"}}}},
    {11, {{{"1/2", "0"}, {"0", "-1"}, {"0", "-1"}, {"0", "8"}}}},
    {12, {{{"1/2", "-1"}, {"0", "5/2"}, {"0", "-5/2"}, {"0", "1"}}}},
    {13, {{{"1/2", "-1/2"}, {"0", "0"}, {"0", "3/2"}, {"0", "-1"}}}},
    {14, {{{"1/2", "0"}, {"0", "-3"}, {"0", "9"}, {"0", "-10"}}}},
    {15, {{{"1/2", "0"}, {"0", "-2"}, {"0", "0"}, {"0", "20"}}}},
    {16, {{{"1/2", "0"}, {"0", "-2"}, {"0", "1/4"}, {"0", "399/16"}}}},
}};

// P(both select CA, CN, SA, SN) as eps -> 0.
constexpr std::array<std::array<const char*, 4>, 16> kSelectedLimits = {{
    {"1", "0", "0", "0"},
    {"0", "1", "0", "0"},
    {"0", "0", "1", "0"},
    {"0", "1", "0", "0"},
    {"0", "1", "0", "0"},
    {"0", "0", "1", "0"},
    {"0", "1/2", "1/2", "0"},
    {"0", "0", "1", "0"},
    {"0", "1/2", "1/2", "0"},
    {"0", "0", "1", "0"},
    {"0", "0", "1", "0"},
    {"1", "0", "0", "0"},
    {"1/2", "0", "1/2", "0"},
    {"0", "0", "1", "0"},
    {"0", "0", "0", "1"},
    {"0", "0", "0", "1"},
}};

struct RegionPoint {
  Region region;
  const char* d;
  const char* q;
};

constexpr std::array<RegionPoint, 12> kRegionPoints = {{
    {Region::A, "1/5", "1/20"},
    {Region::B, "1/5", "2/5"},
    {Region::C, "9/10", "1/20"},
    {Region::D, "4/5", "29/50"},
    {Region::E, "3/5", "1/2"},
    {Region::F, "2/5", "3/20"},
    {Region::G, "3/5", "3/10"},
    {Region::H, "4/5", "2/5"},
    {Region::I, "1/5", "7/10"},
    {Region::J, "7/10", "4/5"},
    {Region::K, "1/10", "1/20"},
    {Region::L, "2/5", "1/4"},
}};

StrategyIndex strategy(int number) { return catalog_entry(number).index(); }

std::string point_label(const Rational& d, const Rational& q) {
  return "(d,q)=(" + to_string(d) + "," + to_string(q) + ")";
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "}";
  return os.str();
}

// Random rational in (0,1) with a prime denominator, so never on a region boundary
// by accident of a small denominator.
Rational random_unit(std::mt19937_64& rng, long den) {
  std::uniform_int_distribution<long> pick(1, den - 1);
  return make_rational(pick(rng), den);
}

}  // namespace

CheckResult check_stage_payoffs(const StagePayoffFn& closed_form, std::uint64_t samples) {
  CheckResult r{"stage-payoffs"};
  const double tol = 3e-3;
  const std::array<double, 3> axis = {0.2, 0.5, 0.8};
  std::uint64_t seed = 1;
  double worst = 0.0;
  for (double d : axis) {
    for (double q : axis) {
      for (auto s : kChainStates) {
        const double mc = stage_payoff_oracle(s, d, q, samples, seed++);
        const double cf = closed_form(s, d, q);
        worst = std::max(worst, std::abs(mc - cf));
        if (std::abs(mc - cf) > tol) {
          std::ostringstream os;
          os << "state " << to_string(s) << " at (d,q)=(" << d << "," << q << "): closed form " << cf
             << ", sampled " << mc;
          r.fail(os.str());
        }
      }
    }
  }
  std::ostringstream os;
  os << "largest deviation " << worst;
  r.notes.push_back(os.str());
  return r;
}

CheckResult check_payoff_series(VerifyContext& ctx) {
  CheckResult r{"payoff-series"};
  std::mt19937_64 rng(4);
  std::vector<std::pair<Rational, Rational>> points;
  for (int i = 0; i < 5; ++i) {
    Rational d = random_unit(rng, 997);
    Rational q = random_unit(rng, 991);
    points.emplace_back(d, q);
  }
  for (const auto& row : kSeries) {
    const auto n = strategy(row.number);
    for (const auto& [d, q] : points) {
      const Params p{d, q};
      const auto got = ctx.cache->homogeneous(n, p).taylor(3);
      std::vector<Rational> want;
      for (const auto& t : row.terms) want.push_back(parse_rational(t[0]) + parse_rational(t[1]) * q);
      if (got != want) {
        r.fail("strategy " + std::to_string(row.number) + " at " + point_label(d, q) + ": got " +
               series_to_string(got) + ", expected " + series_to_string(want));
      }
    }
  }
  return r;
}

CheckResult check_stationary_limits(VerifyContext&) {
  CheckResult r{"stationary-limits"};
  for (const auto& e : catalog()) {
    const auto lim = selected_pair_limit(e.index(), e.index());
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        const Rational want = a == b ? parse_rational(kSelectedLimits[e.number - 1][a]) : Rational(0);
        if (lim[a][b] != want) {
          r.fail("strategy " + std::to_string(e.number) + " selects (" +
                 std::string(to_string(static_cast<SelectedAction>(a))) + "," +
                 std::string(to_string(static_cast<SelectedAction>(b))) + ") with limit " + to_string(lim[a][b]) +
                 ", expected " + to_string(want));
        }
      }
    }
  }
  return r;
}

CheckResult check_ess_regions(VerifyContext& ctx) {
  CheckResult r{"ess-regions"};
  ScanOptions opts;
  opts.workers = ctx.workers;
  for (const auto& pt : kRegionPoints) {
    const Rational d = parse_rational(pt.d), q = parse_rational(pt.q);
    const auto labels = region_labels(d, q);
    const std::string where = "region " + std::string(to_string(pt.region)) + " " + point_label(d, q);
    if (!labels.contains(pt.region) || labels.on_boundary) {
      r.fail(where + ": point is not strictly inside the region");
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = scan_all_ess(d, q, opts, ctx.cache);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto want = predicted_ess(labels);
    const auto want_eff = predicted_efficient(labels);
    if (report.ess != want) r.fail(where + ": ESS " + join(report.ess) + ", expected " + join(want));
    if (report.efficient != want_eff) {
      r.fail(where + ": efficient " + join(report.efficient) + ", expected " + join(want_eff));
    }
    if (report.degenerate) r.fail(where + ": flagged degenerate");
    std::ostringstream os;
    os << where << " [" << labels.labels() << "] ESS " << join(report.ess) << " efficient "
       << join(report.efficient) << " in " << std::fixed << std::setprecision(1) << secs << "s";
    r.notes.push_back(os.str());
  }
  return r;
}

CheckResult check_single_shot(VerifyContext&) {
  CheckResult r{"single-shot"};
  const Rational half(1, 2);
  std::size_t sn_points = 0;
  for (const auto& d : default_grid_axis()) {
    for (const auto& q : default_grid_axis()) {
      const Rational h = half * d * (2 - d);
      std::vector<SelectedAction> want;
      if (d < half && q < h) want.push_back(SelectedAction::CA);
      if (q > h) want.push_back(SelectedAction::CN);
      if (d > half && q < d) want.push_back(SelectedAction::SA);
      auto got = single_shot_ess(d, q);
      if (std::find(got.begin(), got.end(), SelectedAction::SN) != got.end()) {
        ++sn_points;
        got.erase(std::find(got.begin(), got.end(), SelectedAction::SN));
      }
      if (got != want) {
        std::string g, w;
        for (auto a : got) g += std::string(to_string(a)) + " ";
        for (auto a : want) w += std::string(to_string(a)) + " ";
        r.fail(point_label(d, q) + ": stable {" + g + "}, expected {" + w + "}");
      }
      const bool ca = !want.empty() && want.front() == SelectedAction::CA;
      if (ca != region_labels(d, q).contains(Region::A)) {
        r.fail(point_label(d, q) + ": one-shot CA regime disagrees with region A");
      }
    }
  }
  r.notes.push_back("SN stable at " + std::to_string(sn_points) + " of 361 grid points");
  return r;
}

CheckResult check_payoff_gaps(VerifyContext& ctx) {
  CheckResult r{"payoff-gaps"};
  const auto ca = uncond_ca(), s12 = strategy(12), s14 = strategy(14);
  {
    const Params p{Rational(1, 5), Rational(1, 20)};
    const auto gap = ctx.cache->homogeneous(s12, p) - ctx.cache->homogeneous(ca, p);
    const auto got = gap.taylor(1);
    const std::vector<Rational> want = {0, p.q / 2};
    if (got != want) r.fail("12 vs CA gap in region K: " + series_to_string(got) + ", expected " + series_to_string(want));
  }
  {
    const Params p{Rational(2, 5), Rational(1, 4)};
    const auto gap = ctx.cache->homogeneous(s14, p) - ctx.cache->homogeneous(ca, p);
    if (gap.limit() != p.q) r.fail("14 vs CA gap in region L tends to " + to_string(gap.limit()) + ", expected q");
  }
  ScanOptions opts;
  opts.mode = ScanMode::Exact;
  for (int k = 1; k <= 4; ++k) {
    const Rational d = make_rational(k, 10);
    for (int side : {-1, 1}) {
      const Rational q = Rational(1, 2) - d + Rational(side, 100);
      EssAnalyzer analyzer(d, q, opts, ctx.cache);
      const bool resists = analyzer.exact_invasion(s14, ca).outcome == InvasionOutcome::Resists;
      if (resists != (side > 0)) {
        r.fail("strategy 14 vs uncond-CA at " + point_label(d, q) + (resists ? ": resists" : ": invaded"));
      }
    }
  }
  return r;
}

CheckResult check_sa_dwell(VerifyContext&) {
  CheckResult r{"sa-dwell"};
  const auto s12 = strategy(12);
  const auto w = stationary_exact(s12, s12);
  const auto got = w.probability(index_of(ChainState::SStar_SStar)).taylor(1);
  const std::vector<Rational> want = {0, Rational(1, 2)};
  if (got != want) r.fail("exact mass of (S*,S*): " + series_to_string(got) + ", expected [0, 1/2]");
  const double f = stationary_float(s12, s12, 1e-4)[index_of(ChainState::SStar_SStar)];
  if (std::abs(f - 5e-5) > 0.05 * 5e-5) r.fail("float mass at eps=1e-4: " + std::to_string(f));
  std::ostringstream os;
  os << "float mass at eps=1e-4: " << f;
  r.notes.push_back(os.str());
  return r;
}

CheckResult check_basins_two(VerifyContext&) {
  CheckResult r{"basins-two"};
  const double eps = 1e-3, offset = 1e-3;
  std::mt19937_64 rng(7);
  int tested = 0, rejected = 0;
  for (int attempt = 0; tested < 20 && attempt < 10000; ++attempt) {
    const Rational d = random_unit(rng, 1009), q = random_unit(rng, 1013);
    const auto labels = region_labels(d, q);
    if (!labels.contains(Region::A) || labels.on_boundary) continue;
    const auto ess = predicted_ess(labels);
    std::uniform_int_distribution<std::size_t> pick(0, ess.size() - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) j = (i + 1) % ess.size();
    const std::array<StrategyIndex, 2> pair{ess[i], ess[j]};
    const auto m = payoff_matrix_float(pair, Params{d, q}, eps);
    double share;
    try {
      share = basin_two(m[0][0], m[0][1], m[1][0], m[1][1]);
    } catch (const NotBistable&) {
      ++rejected;
      continue;
    }
    // Strategy 1 takes over from x1 above 1 - share.
    const double boundary = 1.0 - share;
    if (boundary - offset <= 0.0 || boundary + offset >= 1.0) {
      ++rejected;
      continue;
    }
    ++tested;
    for (int side : {1, -1}) {
      const double x1 = boundary + side * offset;
      const std::array<double, 2> x0{x1, 1.0 - x1};
      const auto a = integrate_to_absorption(x0, m);
      const std::size_t expect = side > 0 ? 0 : 1;
      if (!a.winner || *a.winner != expect) {
        std::ostringstream os;
        os << "pair " << pair[0] << "," << pair[1] << " at " << point_label(d, q) << " from x1=" << x1 << ": "
           << (a.winner ? "absorbed by " + std::to_string(pair[*a.winner]) : std::string("unresolved"));
        r.fail(os.str());
      }
    }
  }
  if (tested < 20) r.fail("only " + std::to_string(tested) + " bistable pairs found");
  r.notes.push_back(std::to_string(tested) + " pairs, " + std::to_string(rejected) + " draws skipped");

  const auto ca = uncond_ca(), s12 = strategy(12), s14 = strategy(14);
  for (int k = 21; k <= 31; ++k) {
    const Rational d(2, 5), q = make_rational(k, 100) + Rational(1, 1000);
    const auto labels = region_labels(d, q);
    if (!labels.contains(Region::L2)) {
      r.fail(point_label(d, q) + " expected in region L2");
      continue;
    }
    if (basin_two(ca, s14, d, q, eps) >= 0.5) r.fail("strategy 14 share not above 1/2 at " + point_label(d, q));
    const auto b = basins_at(d, q, eps);
    if (std::find(b.strategies.begin(), b.strategies.end(), s12) != b.strategies.end()) {
      r.fail("strategy 12 given a basin in region L2 at " + point_label(d, q));
    }
  }
  const std::array<std::pair<Rational, Rational>, 4> deep_k = {{{Rational(1, 10), Rational(1, 40)},
                                                                {Rational(1, 5), Rational(1, 20)},
                                                                {Rational(3, 20), Rational(1, 30)},
                                                                {Rational(1, 4), Rational(1, 20)}}};
  for (const auto& [d, q] : deep_k) {
    if (!region_labels(d, q).contains(Region::K)) {
      r.fail(point_label(d, q) + " expected in region K");
      continue;
    }
    if (basin_two(ca, s12, d, q, eps) >= 0.5) r.fail("strategy 12 share not above 1/2 at " + point_label(d, q));
    const auto b = basins_at(d, q, eps);
    if (std::find(b.strategies.begin(), b.strategies.end(), s14) != b.strategies.end()) {
      r.fail("strategy 14 given a basin in region K at " + point_label(d, q));
    }
  }
  try {
    basins_at(Rational(1, 5), Rational(1, 2), eps);
    r.fail("basins accepted a point outside region A");
  } catch (const std::domain_error&) {
  }
  return r;
}

const BasinBaseline& basin_baseline() {
  static const BasinBaseline b{Rational(21, 50), Rational(13, 100), 1e-3,
                               {uncond_ca(), strategy(12), strategy(14)}, {0, 14076, 5625}};
  return b;
}

CheckResult check_basins_three(VerifyContext& ctx) {
  CheckResult r{"basins-three"};
  const auto& base = basin_baseline();
  const auto first = basins_at(base.d, base.q, base.eps, 200, 1);
  const auto second = basins_at(base.d, base.q, base.eps, 200, std::max(2u, ctx.workers));
  if (first.total != 19701) r.fail("expected 19701 initial conditions, got " + std::to_string(first.total));
  if (first.unresolved != 0) r.fail(std::to_string(first.unresolved) + " trajectories unresolved");
  double sum = 0.0;
  for (double s : first.share) sum += s;
  if (std::abs(sum - 1.0) > 1e-12) r.fail("shares sum to " + std::to_string(sum));
  if (first.count != second.count || first.share != second.share) r.fail("rerun with more workers differs");
  const std::vector<StrategyIndex> strategies(base.strategies.begin(), base.strategies.end());
  const std::vector<std::size_t> counts(base.counts.begin(), base.counts.end());
  if (first.strategies != strategies) r.fail("unexpected strategy set " + join(first.strategies));
  if (first.count != counts) r.fail("counts " + join(first.count) + " differ from baseline " + join(counts));
  r.notes.push_back("counts " + join(first.count) + " at " + point_label(base.d, base.q));
  return r;
}

CheckResult check_properties(VerifyContext& ctx) {
  CheckResult r{"properties"};
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> any(0, kNumStrategies - 1);

  const auto one = EpsPolynomial::constant(1);
  for (int i = 0; i < 300; ++i) {
    const auto n = static_cast<StrategyIndex>(any(rng)), m = static_cast<StrategyIndex>(any(rng));
    const auto t = build_transition_exact(n, m);
    for (std::size_t s = 0; s < kNumChainStates; ++s) {
      EpsPolynomial sum;
      for (const auto& e : t[s]) sum += e;
      if (!(sum == one)) r.fail("row " + std::to_string(s) + " of chain " + std::to_string(n) + "," + std::to_string(m));
    }
  }

  for (int i = 0; i < 40; ++i) {
    const auto n = static_cast<StrategyIndex>(any(rng)), m = static_cast<StrategyIndex>(any(rng));
    const Params p{random_unit(rng, 997), random_unit(rng, 991)};
    const auto [a, b] = ctx.cache->payoffs(n, m, p);
    std::array<Rational, kNumChainStates> total;
    for (auto s : kChainStates) {
      int attackers = 0;
      for (auto x : {first(s), second(s)}) attackers += x == RealizedAction::CA || x == RealizedAction::SA;
      total[index_of(s)] = 1 - p.q * attackers;
    }
    const auto w = n <= m ? ctx.cache->canonical(n, m) : ctx.cache->canonical(m, n);
    if (compare_small_eps(a + b, w->expectation(total)) != Sign::Zero) {
      r.fail("payoffs of " + std::to_string(n) + "," + std::to_string(m) + " do not sum to 1 - q*attackers");
    }
  }

  double drift = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PayoffMatrix m(3, std::vector<double>(3));
    for (auto& row : m) {
      for (auto& v : row) v = u(rng);
    }
    std::array<double, 3> x0{u(rng) + 0.01, u(rng) + 0.01, u(rng) + 0.01};
    const double s = x0[0] + x0[1] + x0[2];
    for (auto& v : x0) v /= s;
    IntegrationOptions opts;
    opts.max_steps = 5000;
    opts.observer = [&](std::span<const double> x) {
      drift = std::max(drift, std::abs(x[0] + x[1] + x[2] - 1.0));
    };
    integrate_to_absorption(x0, m, opts);
    const std::array<double, 3> vertex{0.0, 1.0, 0.0};
    for (double v : replicator_rhs(vertex, m)) {
      if (v != 0.0) r.fail("vertex is not a rest point");
    }
  }
  if (drift > 1e-10) r.fail("simplex drift " + std::to_string(drift));

  ScanOptions one_worker, many;
  many.workers = std::max(3u, ctx.workers);
  const Rational d(3, 5), q(3, 10);
  const auto x = scan_all_ess(d, q, one_worker, ctx.cache).to_json();
  const auto y = scan_all_ess(d, q, many, ctx.cache).to_json();
  if (x != y) r.fail("scan differs between 1 and " + std::to_string(many.workers) + " workers");
  return r;
}

std::span<const CheckSpec> verification_checks() {
  static const std::vector<CheckSpec> checks = {
      {"stage-payoffs", "sampled stage payoffs match the closed forms",
       [](VerifyContext&) { return check_stage_payoffs(); }},
      {"payoff-series", "homogeneous payoff series of the 16 catalog strategies", check_payoff_series},
      {"stationary-limits", "eps->0 selected-action distributions of the catalog strategies",
       check_stationary_limits},
      {"ess-regions", "full ESS scans at one point per region", check_ess_regions},
      {"single-shot", "one-round ESS regimes on the 19x19 grid", check_single_shot},
      {"payoff-gaps", "payoff gaps of strategies 12 and 14 over uncond-CA", check_payoff_gaps},
      {"sa-dwell", "solo time of strategy 12 against itself", check_sa_dwell},
      {"basins-two", "closed-form two-strategy basins against integration", check_basins_two},
      {"basins-three", "three-strategy basin baseline", check_basins_three},
      {"properties", "stochasticity, payoff conservation, simplex drift, worker determinism", check_properties},
  };
  return checks;
}

bool run_verification(VerifyContext& ctx, const std::vector<std::string>& only, std::ostream& out) {
  for (const auto& name : only) {
    const auto checks = verification_checks();
    if (std::none_of(checks.begin(), checks.end(), [&](const CheckSpec& c) { return c.name == name; })) {
      throw std::invalid_argument("unknown check: " + name);
    }
  }
  bool ok = true;
  for (const auto& spec : verification_checks()) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.name) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = spec.run(ctx);
    } catch (const std::exception& e) {
      res.name = std::string(spec.name);
      res.fail(std::string("exception: ") + e.what());
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && res.passed;
    out << (res.passed ? "PASS " : "FAIL ") << std::left << std::setw(18) << spec.name << std::right << std::fixed
        << std::setprecision(2) << std::setw(8) << res.seconds << "s  " << spec.summary << "\n";
    for (const auto& f : res.failures) out << "    failed: " << f << "\n";
    for (const auto& n : res.notes) out << "    " << n << "\n";
    out.flush();
  }
  return ok;
}

}  // namespace crowdgame
