// Full ESS scan on every point of the default 19x19 grid, compared with the
// catalog's region column. Slow: roughly 15 minutes on one core.
#include "crowdgame/ess.hpp"
#include "crowdgame/regions.hpp"

#include <cstdio>
#include <thread>

using namespace crowdgame;

int main() {
  auto cache = std::make_shared<ExactPairCache>(1u << 16);
  ScanOptions opts;
  opts.workers = std::max(1u, std::thread::hardware_concurrency());
  int bad = 0, points = 0, skipped = 0;
  for (const auto& d : default_grid_axis()) {
    for (const auto& q : default_grid_axis()) {
      if (region_labels(d, q).on_boundary) {
        ++skipped;
        continue;
      }
      const auto report = scan_all_ess(d, q, opts, cache);
      ++points;
      const bool ok = report.ess == predicted_ess(report.regions) &&
                      report.efficient == predicted_efficient(report.regions) && !report.degenerate;
      if (!ok) {
        ++bad;
        std::printf("mismatch at (%s, %s) regions %s\n", to_string(d).c_str(), to_string(q).c_str(),
                    report.regions.labels().c_str());
      }
    }
  }
  std::printf("%d of %d off-boundary grid points match (%d on a boundary)\n", points - bad, points, skipped);
  return bad == 0 ? 0 : 1;
}
