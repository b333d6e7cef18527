#pragma once

#include <string>
#include <vector>

#include "lgvi/harness/experiment.hpp"

namespace lgvi {

struct MethodSummary {
  std::string method;
  double terminal_f_gap = 0.0;
  double max_ortho_err = 0.0;
  double final_t = 0.0;
  long steps = 0;
  double wall_mean_s = 0.0;  // averaged over repetitions; reported, never asserted
  ExperimentResult result;
};

struct CompareReport {
  std::vector<MethodSummary> methods;
  /// Aligned-by-t view: for each grid time, the latest row at or before it
  /// per method (f_gap then ortho_err, in method order).
  std::vector<double> t_grid;
  std::vector<std::vector<double>> f_gap_by_method;
  std::vector<std::vector<double>> ortho_by_method;
};

/// Runs each config (all must share objective and seed), aligns trajectories
/// on a common geometric t grid, and times wall clock over `repetitions`
/// repeated runs.
CompareReport compare_integrators(const std::vector<ExperimentConfig>& configs,
                                  int repetitions = 1, int grid_points = 200);

void write_compare_csv(const std::string& path, const CompareReport& report);
std::string format_compare_summary(const CompareReport& report);

}  // namespace lgvi
