#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>

namespace lgvi {

enum class IntegratorKind { Lgvi, Elgvi, Splt, Rk4, Rk45 };
enum class ObjectiveKind { Wahba, Pose, Quadratic };

std::string to_string(IntegratorKind k);
std::string to_string(ObjectiveKind k);
IntegratorKind integrator_from_string(const std::string& s);
ObjectiveKind objective_from_string(const std::string& s);

/// One experiment fully specified: objective, integrator, schedule
/// parameters, horizon, and seeding. Every field maps to one config-file key
/// and one CLI flag of the same name.
struct ExperimentConfig {
  ObjectiveKind objective = ObjectiveKind::Wahba;
  IntegratorKind integrator = IntegratorKind::Lgvi;

  double p = 2.0;
  double C = 1.0;
  double lambda = 1.0;
  /// Metric spec: "identity", "iso:<c>", or "diag:<a,b,c>" (rotation block;
  /// the vector block of a product stays identity).
  std::string J = "identity";

  double h0 = 0.1;
  double t0 = 0.0;       // 0 means: default to h0 (schedule is singular at 0)
  double t_final = 0.0;  // horizon by time, or
  long steps = 0;        // by step count (exactly one must be set)

  std::uint64_t seed = 0;
  std::string out;     // trajectory CSV path; empty writes nothing
  long log_every = 1;  // CSV row decimation for long runs (last row always kept)

  // solver
  double h_tolerance = 1e-4;
  double h_min = 1e-9;
  double h_max = 10.0;
  int max_outer_iterations = 100;
  double newton_tolerance = 1e-12;
  bool trailing_theta_k = false;
  double rk_tol = 1e-8;

  /// Record wall-clock in the CSV; off by default so identical seeds produce
  /// byte-identical files.
  bool timing = false;

  // wahba
  double init_angle = 0.9 * 3.14159265358979323846;

  // pose estimation
  int n_features = 516;
  double fx = 500.0, fy = 500.0, cx = 320.0, cy = 240.0;
  double pose_rot_perturb = 0.3;
  double pose_trans_perturb = 0.5;
  std::string grad_method = "fd";  // fd | analytic
  std::string features_file;       // ingest instead of synthesizing

  // custom quadratic
  int quad_dim = 1;

  void validate() const;
};

/// Flat `key = value` file ('#' comments). Unknown keys are an error.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Applies key/value pairs onto a config; throws ParseError for unknown keys
/// or malformed values.
void apply_config_entries(ExperimentConfig& config,
                          const std::map<std::string, std::string>& entries);

ExperimentConfig config_from_entries(
    const std::map<std::string, std::string>& entries);

}  // namespace lgvi
