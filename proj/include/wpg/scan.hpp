#pragma once

#include <iosfwd>
#include <vector>

#include "wpg/error.hpp"

namespace wpg {

struct ScanRow {
  double alpha = 0.0;
  int k = 0;
  int n_alpha = 0;
  int N_alpha = 0;
  int wp_count = 0;
  bool boundary_flag = false;
  double max_residual = 0.0;
};

// `steps` equally spaced alpha values from alpha_min to alpha_max inclusive,
// classified independently, in ascending order.
std::vector<ScanRow> alpha_scan(int k, double alpha_min, double alpha_max, int steps,
                                Exec exec = Exec::parallel);

// Header: alpha,k,n_alpha,N_alpha,wp_count,boundary_flag,max_residual
void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out);
// Array of objects keyed like the CSV columns.
void write_scan_json(const std::vector<ScanRow>& rows, std::ostream& out);

}  // namespace wpg
