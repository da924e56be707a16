#include "wpg/scan.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "wpg/reduce.hpp"

namespace wpg {

namespace {

ScanRow row_for(int k, double alpha) {
  const ClassificationReport rep = classify(alpha, k);
  return ScanRow{alpha, k, rep.n_alpha, rep.N_alpha, rep.wp_count, rep.boundary_flag, rep.max_residual};
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::vector<ScanRow> alpha_scan(int k, double alpha_min, double alpha_max, int steps, Exec exec) {
  if (!(alpha_min > 0.0)) throw InvalidArgument("scan: alpha_min must be positive");
  if (!(alpha_max > alpha_min)) throw InvalidArgument("scan: alpha_max must exceed alpha_min");
  if (steps < 2) throw InvalidArgument("scan: need at least 2 steps");
  if (k < 2) throw InvalidArgument("scan: need k >= 2");
  xi_polynomial(k);  // build the symbolic reduction once, outside the loop

  std::vector<ScanRow> rows(static_cast<std::size_t>(steps));
  const double span = alpha_max - alpha_min;
  auto alpha_at = [&](int i) { return i == steps - 1 ? alpha_max : alpha_min + span * i / (steps - 1); };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < steps; ++i) rows[static_cast<std::size_t>(i)] = row_for(k, alpha_at(i));
  } else {
    for (int i = 0; i < steps; ++i) rows[static_cast<std::size_t>(i)] = row_for(k, alpha_at(i));
  }
  return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out) {
  out << "alpha,k,n_alpha,N_alpha,wp_count,boundary_flag,max_residual\n";
  for (const ScanRow& r : rows) {
    out << fmt("%.12g", r.alpha) << ',' << r.k << ',' << r.n_alpha << ',' << r.N_alpha << ',' << r.wp_count << ','
        << (r.boundary_flag ? 1 : 0) << ',' << fmt("%.6e", r.max_residual) << '\n';
  }
}

void write_scan_json(const std::vector<ScanRow>& rows, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ScanRow& r : rows) {
    arr.push_back({{"alpha", r.alpha},
                   {"k", r.k},
                   {"n_alpha", r.n_alpha},
                   {"N_alpha", r.N_alpha},
                   {"wp_count", r.wp_count},
                   {"boundary_flag", r.boundary_flag},
                   {"max_residual", r.max_residual}});
  }
  out << arr.dump(2) << '\n';
}

}  // namespace wpg
