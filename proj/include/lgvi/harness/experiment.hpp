#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgvi/camera.hpp"
#include "lgvi/harness/config.hpp"
#include "lgvi/integrators.hpp"

namespace lgvi {

struct TrajectoryRow {
  long k = 0;
  double t = 0.0;
  double h = 0.0;  // step accepted on arrival at this row (row 0: h0)
  double f = 0.0;
  double f_gap = 0.0;
  double E = 0.0;
  double ortho_err = 0.0;
  int solver_iters = 0;
  double wall_s = 0.0;
};

/// Fully materialized problem: objective plus ground truth and the seeded
/// initial point, assembled in a fixed RNG draw order (problem data first,
/// then the initial perturbation).
struct ProblemSetup {
  Objective objective;
  GroupPoint g0;
  Eigen::VectorXd mu0;
  BregmanParams params;
  double f_star = 0.0;
  std::optional<GroupPoint> g_star;
  std::optional<CameraScene> scene;
};

ProblemSetup setup_problem(const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<TrajectoryRow> rows;
  ProblemSetup setup;
  std::optional<GroupPoint> final_g;
  /// LGVI only, short runs: full extended states and accepted relative
  /// updates, for recomputing the discrete-energy handoff externally.
  std::vector<ExtendedState> states;
  std::vector<GroupPoint> relative_updates;
  /// Online Eq-handoff check, recomputed each step from trajectory data; kept
  /// for arbitrarily long runs where snapshots would not fit.
  double max_handoff_residual = 0.0;
  long handoff_count = 0;
  double mean_h_accum = 0.0;
  long step_count = 0;
  bool failed = false;
  std::string failure;

  double mean_h() const {
    return step_count > 0 ? mean_h_accum / static_cast<double>(step_count) : 0.0;
  }
};

/// Runs the configured integrator, writes the trajectory CSV when an output
/// path is set, and returns the in-memory records. A step failure produces a
/// partial result with failed = true (plus a trailing NaN row in the CSV).
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryRow>& rows,
                          bool failed = false);
std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path);

}  // namespace lgvi
