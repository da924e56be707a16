// Serial reference vs OpenMP kernels: configuration enumeration, multistart
// fixed-point search and alpha scans. Prints wall time and speedup per kernel.
//
//   bench_kernels [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "wpg/fields.hpp"
#include "wpg/measures.hpp"
#include "wpg/scan.hpp"

using namespace wpg;

namespace {

double best_of(int repeats, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial, double parallel, bool same) {
  std::printf("%-34s %10.4f %10.4f %8.2fx  %s\n", name.c_str(), serial, parallel, serial / parallel,
              same ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");

  {
    const auto p = ModelParams::from_alpha(2, 1, 0.4);
    const Ball b = enumerate_ball(3, 2);
    const auto field = weakly_periodic_boundary(b, FieldVector{{0.3, -0.2, 0.5, 0.1}}, SubgroupSpec::leading(2, 1), p);
    FiniteMeasure s(b, {}, 0.0), q(b, {}, 0.0);
    double ts = best_of(repeats, [&] { s = finite_measure(3, field, p, Exec::serial); });
    double tp = best_of(repeats, [&] { q = finite_measure(3, field, p, Exec::parallel); });
    report("enumerate mu_3, k=2 (2^22 configs)", ts, tp, s.weights() == q.weights());
  }
  {
    const auto p = ModelParams::from_alpha(3, 2, 0.2);
    SolveReport s, q;
    double ts = best_of(repeats, [&] { s = fixed_points_W(p, InvariantSet::none, {}, Exec::serial); });
    double tp = best_of(repeats, [&] { q = fixed_points_W(p, InvariantSet::none, {}, Exec::parallel); });
    report("multistart W, k=3 |A|=2 (9^4 starts)", ts, tp, s.fixed_points == q.fixed_points);
  }
  {
    std::vector<ScanRow> s, q;
    double ts = best_of(repeats, [&] { s = alpha_scan(6, 0.05, 8.0, 4000, Exec::serial); });
    double tp = best_of(repeats, [&] { q = alpha_scan(6, 0.05, 8.0, 4000, Exec::parallel); });
    bool same = s.size() == q.size();
    for (std::size_t i = 0; same && i < s.size(); ++i)
      same = s[i].alpha == q[i].alpha && s[i].wp_count == q[i].wp_count && s[i].max_residual == q[i].max_residual;
    report("alpha scan, k=6 (4000 rows)", ts, tp, same);
  }
  return 0;
}
