#include "crowdgame/ess.hpp"
#include "crowdgame/markov.hpp"
#include "crowdgame/regions.hpp"
#include "crowdgame/replicator.hpp"
#include "crowdgame/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

using namespace crowdgame;
using nlohmann::json;

namespace {

struct Grid {
  Rational start, step;
  int count = 0;

  std::vector<Rational> points() const {
    std::vector<Rational> out;
    for (int i = 0; i < count; ++i) out.emplace_back(start + step * i);
    return out;
  }
};

// "start:step:count", e.g. "51/1000:1/20:19".
Grid parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = text.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw std::invalid_argument("grid must be start:step:count, got " + text);
  }
  Grid g{parse_rational(text.substr(0, a)), parse_rational(text.substr(a + 1, b - a - 1))};
  g.count = std::stoi(text.substr(b + 1));
  if (g.count < 1) throw std::invalid_argument("grid count must be positive");
  for (const auto& p : g.points()) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("grid point " + to_string(p) + " is outside (0,1)");
  }
  return g;
}

const std::string kDefaultGrid = "51/1000:1/20:19";

StrategyIndex parse_ref(const std::string& text) {
  if (!text.empty() && text[0] == '#') return catalog_entry(std::stoi(text.substr(1))).index();
  return parse_strategy_ref(text);
}

unsigned default_workers() {
  if (const char* env = std::getenv("CROWDESS_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring CROWDESS_WORKERS=" << env << "\n";
  }
  return 1;
}

std::string join_indices(const std::vector<StrategyIndex>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
  return out;
}

std::string region_field(const RegionSet& r) {
  return r.on_boundary ? "boundary:" + r.labels() : r.labels();
}

std::string csv_row(const EssReport& r) {
  return to_string(r.d) + "," + to_string(r.q) + "," + join_indices(r.ess) + "," + join_indices(r.efficient) + "," +
         region_field(r.regions);
}

const char* kPhaseHeader = "d,q,ess,efficient,regions";

// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

ScanMode scan_mode(const std::string& mode) {
  if (mode == "exact") return ScanMode::Exact;
  if (mode == "screen") return ScanMode::Screen;
  throw std::invalid_argument("ESS verdicts are eps -> 0 limits; use --mode exact or --mode screen");
}

void print_series(std::ostream& os, const std::vector<Rational>& s) { os << series_to_string(s) << "\n"; }

struct Common {
  std::string d = "1/5", q = "1/20";
  std::string mode = "exact";
  std::string format = "json";
  std::string out;
  unsigned workers = default_workers();
};

Params params_of(const Common& c, double eps = 0.0) {
  Params p{parse_rational(c.d), parse_rational(c.q), eps};
  p.validate();
  return p;
}

int cmd_payoff(const Common& c, const std::string& n_ref, const std::string& m_ref, double eps, int order) {
  const auto n = parse_ref(n_ref), m = parse_ref(m_ref);
  if (c.mode == "float") {
    const auto p = params_of(c, eps);
    std::cout << std::setprecision(17) << average_payoff_float(n, m, p, eps) << "\n";
    return 0;
  }
  if (c.mode != "exact") throw std::invalid_argument("payoff supports --mode exact or float");
  const auto p = params_of(c);
  const auto f = average_payoff_exact(n, m, p);
  std::cout << f.to_string() << "\n";
  print_series(std::cout, f.taylor(order));
  return 0;
}

int cmd_stationary(const Common& c, const std::string& n_ref, const std::string& m_ref, double eps) {
  const auto n = parse_ref(n_ref), m = parse_ref(m_ref);
  Output out(c.out);
  auto& os = out.stream();
  if (c.mode == "float") {
    const auto x = stationary_float(n, m, eps);
    os << "state,probability\n" << std::setprecision(17);
    for (auto s : kChainStates) os << to_string(s) << "," << x[index_of(s)] << "\n";
    return 0;
  }
  if (c.mode != "exact") throw std::invalid_argument("stationary supports --mode exact or float");
  const auto w = stationary_exact(n, m);
  os << "state,probability,limit\n";
  for (auto s : kChainStates) {
    const auto p = w.probability(index_of(s));
    os << to_string(s) << ",\"" << p.to_string() << "\"," << to_string(p.limit()) << "\n";
  }
  return 0;
}

int cmd_series(const Common& c, const std::string& n_ref, const std::string& m_ref, int order) {
  const auto n = parse_ref(n_ref);
  const auto m = m_ref.empty() ? n : parse_ref(m_ref);
  print_series(std::cout, payoff_series(n, m, params_of(c), order));
  return 0;
}

int cmd_ess_scan(const Common& c) {
  ScanOptions opts;
  opts.mode = scan_mode(c.mode);
  opts.workers = c.workers;
  const auto report = scan_all_ess(parse_rational(c.d), parse_rational(c.q), opts);
  Output out(c.out);
  if (c.format == "csv") {
    out.stream() << kPhaseHeader << "\n" << csv_row(report) << "\n";
  } else {
    out.stream() << report.to_json().dump(2) << "\n";
  }
  return 0;
}

// Completed points go to a log, one JSON line each, so an interrupted sweep
// picks up where it stopped. The output file is written from the log in grid
// order once every point is done.
int cmd_phase_diagram(const Common& c, const std::string& d_grid, const std::string& q_grid, std::string log_path) {
  if (c.out.empty()) throw std::invalid_argument("phase-diagram needs --out");
  if (log_path.empty()) log_path = c.out + ".log";
  ScanOptions opts;
  opts.mode = scan_mode(c.mode);

  std::vector<std::pair<Rational, Rational>> points;
  for (const auto& d : parse_grid(d_grid).points()) {
    for (const auto& q : parse_grid(q_grid).points()) points.emplace_back(d, q);
  }

  std::map<std::size_t, json> done;
  if (std::ifstream in(log_path); in) {
    std::string line;
    while (std::getline(in, line)) {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        continue;  // torn final line from an interrupted run
      }
      const auto i = j.at("index").get<std::size_t>();
      if (i < points.size() && j.at("d") == to_string(points[i].first) && j.at("q") == to_string(points[i].second)) {
        done[i] = j;
      }
    }
  }
  if (!done.empty()) std::cerr << "resuming: " << done.size() << " of " << points.size() << " points done\n";

  std::vector<bool> finished(points.size(), false);
  for (const auto& [i, j] : done) finished[i] = true;

  bool torn = false;
  if (std::ifstream in(log_path, std::ios::binary); in && in.seekg(0, std::ios::end) && in.tellg() > 0) {
    in.seekg(-1, std::ios::end);
    torn = in.get() != '\n';
  }
  std::ofstream log(log_path, std::ios::app);
  if (!log) throw std::runtime_error("cannot open " + log_path);
  if (torn) log << "\n";
  std::mutex mu;
  auto cache = std::make_shared<ExactPairCache>(1u << 16);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      if (finished[i]) continue;
      try {
        const auto report = scan_all_ess(points[i].first, points[i].second, opts, cache);
        json j = {{"index", i},
                  {"d", to_string(report.d)},
                  {"q", to_string(report.q)},
                  {"ess", report.ess},
                  {"efficient", report.efficient},
                  {"regions", region_field(report.regions)},
                  {"degenerate", report.degenerate}};
        std::lock_guard lock(mu);
        log << j.dump() << "\n" << std::flush;
        done[i] = j;
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < c.workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  Output out(c.out);
  auto& os = out.stream();
  if (c.format == "csv") {
    os << kPhaseHeader << "\n";
    for (const auto& [i, j] : done) {
      os << j["d"].get<std::string>() << "," << j["q"].get<std::string>() << ","
         << join_indices(j["ess"].get<std::vector<StrategyIndex>>()) << ","
         << join_indices(j["efficient"].get<std::vector<StrategyIndex>>()) << "," << j["regions"].get<std::string>()
         << "\n";
    }
  } else {
    json all = json::array();
    for (auto [i, j] : done) {
      j.erase("index");
      all.push_back(j);
    }
    os << all.dump(2) << "\n";
  }
  return 0;
}

std::string actions_field(const std::vector<SelectedAction>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::string(to_string(v[i]));
  return out;
}

int cmd_single_shot(const Common& c, bool grid) {
  Output out(c.out);
  auto& os = out.stream();
  if (!grid) {
    os << actions_field(single_shot_ess(parse_rational(c.d), parse_rational(c.q))) << "\n";
    return 0;
  }
  os << "d,q,stable\n";
  for (const auto& d : default_grid_axis()) {
    for (const auto& q : default_grid_axis()) {
      os << to_string(d) << "," << to_string(q) << "," << actions_field(single_shot_ess(d, q)) << "\n";
    }
  }
  return 0;
}

int cmd_basins(const Common& c, double eps, int divisions, const std::string& d_grid, const std::string& q_grid) {
  std::vector<std::pair<Rational, Rational>> points;
  if (d_grid.empty() && q_grid.empty()) {
    points.emplace_back(parse_rational(c.d), parse_rational(c.q));
  } else {
    for (const auto& d : parse_grid(d_grid.empty() ? kDefaultGrid : d_grid).points()) {
      for (const auto& q : parse_grid(q_grid.empty() ? kDefaultGrid : q_grid).points()) {
        const auto r = region_labels(d, q);
        if (r.contains(Region::A) && !r.on_boundary) points.emplace_back(d, q);
      }
    }
  }
  Output out(c.out);
  auto& os = out.stream();
  os << "d,q,epsilon,strategy_index,share,unresolved_fraction\n" << std::setprecision(17);
  for (const auto& [d, q] : points) {
    const auto b = basins_at(d, q, eps, divisions, c.workers);
    for (std::size_t i = 0; i < b.strategies.size(); ++i) {
      os << to_string(d) << "," << to_string(q) << "," << eps << "," << b.strategies[i] << "," << b.share[i] << ","
         << b.unresolved_fraction() << "\n";
    }
  }
  return 0;
}

int cmd_verify(const Common& c, const std::vector<std::string>& only) {
  VerifyContext ctx;
  ctx.workers = c.workers;
  const bool ok = run_verification(ctx, only, std::cout);
  std::cout << (ok ? "all checks passed" : "verification FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ESS and basin analysis of a repeated crowdsourcing game with noisy play"};
  app.require_subcommand(1);
  Common c;

  auto point_opts = [&](CLI::App* sub) {
    sub->add_option("--d", c.d, "productivity loss from an attack, rational in (0,1)")->capture_default_str();
    sub->add_option("--q", c.q, "cost of attacking, rational in (0,1)")->capture_default_str();
  };
  // Default is exact, except screen for the ESS scans.
  auto mode_opt = [&](CLI::App* sub, const std::string& def) {
    sub->add_option("--mode", c.mode, "exact, float or screen (default " + def + ")")
        ->check(CLI::IsMember({"exact", "float", "screen"}));
  };
  auto out_opts = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };
  auto workers_opt = [&](CLI::App* sub) {
    sub->add_option("--workers", c.workers, "worker threads (default $CROWDESS_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };

  std::string n_ref, m_ref, d_grid = kDefaultGrid, q_grid = kDefaultGrid, log_path;
  std::string basin_d_grid, basin_q_grid;
  double eps = 1e-3;
  int order = 3, divisions = 200;
  bool grid = false;
  std::vector<std::string> only;

  auto* payoff = app.add_subcommand("payoff", "average payoff of n against m");
  payoff->add_option("--n", n_ref, "strategy of player 1: index, #catalog-number or table")->required();
  payoff->add_option("--m", m_ref, "strategy of player 2")->required();
  payoff->add_option("--eps", eps, "error rate (float mode)")->capture_default_str();
  payoff->add_option("--series", order, "series order printed in exact mode")->capture_default_str();
  point_opts(payoff);

  auto* stationary = app.add_subcommand("stationary", "stationary distribution of the pair chain");
  stationary->add_option("--n", n_ref)->required();
  stationary->add_option("--m", m_ref)->required();
  stationary->add_option("--eps", eps, "error rate (float mode)")->capture_default_str();
  stationary->add_option("--out", c.out, "output file (default stdout)");

  auto* series = app.add_subcommand("series", "Taylor coefficients of the payoff in eps");
  series->add_option("--n", n_ref)->required();
  series->add_option("--m", m_ref, "opponent (default: n itself)");
  series->add_option("--order", order)->capture_default_str();
  point_opts(series);

  auto* ess_scan = app.add_subcommand("ess-scan", "all ESSs among the 4096 strategies at one point");
  point_opts(ess_scan);
  out_opts(ess_scan);
  workers_opt(ess_scan);

  auto* phase = app.add_subcommand("phase-diagram", "ESS scan over a grid (resumable)");
  phase->add_option("--d-grid", d_grid, "start:step:count")->capture_default_str();
  phase->add_option("--q-grid", q_grid, "start:step:count")->capture_default_str();
  phase->add_option("--log", log_path, "completion log (default OUT.log)");
  out_opts(phase);
  workers_opt(phase);

  auto* single = app.add_subcommand("single-shot", "stable actions of the one-round game");
  point_opts(single);
  single->add_flag("--grid", grid, "sweep the default 19x19 grid");
  single->add_option("--out", c.out, "output file (default stdout)");

  auto* basins = app.add_subcommand("basins", "basin shares of the coexisting ESSs in region A");
  point_opts(basins);
  basins->add_option("--eps", eps)->capture_default_str();
  basins->add_option("--divisions", divisions, "initial-condition grid resolution")->capture_default_str();
  basins->add_option("--d-grid", basin_d_grid, "start:step:count; sweeps instead of --d/--q");
  basins->add_option("--q-grid", basin_q_grid, "start:step:count");
  basins->add_option("--out", c.out, "output file (default stdout)");
  workers_opt(basins);

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--only", only, "check names to run");
  workers_opt(verify);

  for (auto* sub : {payoff, stationary}) mode_opt(sub, "exact");
  mode_opt(ess_scan, "screen");
  mode_opt(phase, "screen");

  CLI11_PARSE(app, argc, argv);

  try {
    if ((*ess_scan && ess_scan->count("--mode") == 0) || (*phase && phase->count("--mode") == 0)) c.mode = "screen";

    if (*payoff) return cmd_payoff(c, n_ref, m_ref, eps, order);
    if (*stationary) return cmd_stationary(c, n_ref, m_ref, eps);
    if (*series) return cmd_series(c, n_ref, m_ref, order);
    if (*ess_scan) return cmd_ess_scan(c);
    if (*phase) return cmd_phase_diagram(c, d_grid, q_grid, log_path);
    if (*single) return cmd_single_shot(c, grid);
    if (*basins) return cmd_basins(c, eps, divisions, basin_d_grid, basin_q_grid);
    if (*verify) return cmd_verify(c, only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
