#include "lgvi/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "lgvi/errors.hpp"
#include "lgvi/harness/feature_file.hpp"
#include "lgvi/runge_kutta.hpp"
#include "lgvi/wahba.hpp"

namespace lgvi {

namespace {

Eigen::Matrix3d rotation_metric_from_spec(const std::string& spec) {
  if (spec == "identity") return Eigen::Matrix3d::Identity();
  if (spec.rfind("iso:", 0) == 0) {
    const double c = std::stod(spec.substr(4));
    return c * Eigen::Matrix3d::Identity();
  }
  if (spec.rfind("diag:", 0) == 0) {
    std::stringstream ss(spec.substr(5));
    Eigen::Vector3d d;
    char comma;
    if (!(ss >> d(0) >> comma >> d(1) >> comma >> d(2))) {
      throw ParseError("bad J spec '" + spec + "'");
    }
    return d.asDiagonal();
  }
  throw ParseError("bad J spec '" + spec + "' (expect identity, iso:c, diag:a,b,c)");
}

MetricOperator metric_from_config(const ExperimentConfig& config, GroupKind kind,
                                  int vec_dim) {
  const Eigen::Matrix3d J_rot = rotation_metric_from_spec(config.J);
  switch (kind) {
    case GroupKind::SO3:
      return MetricOperator::so3(J_rot);
    case GroupKind::Rn:
      return MetricOperator::rn(Eigen::MatrixXd::Identity(vec_dim, vec_dim));
    case GroupKind::Product:
      return MetricOperator::product(J_rot,
                                     Eigen::MatrixXd::Identity(vec_dim, vec_dim));
  }
  throw ParseError("metric_from_config: unknown kind");
}

ProblemSetup setup_wahba(const ExperimentConfig& config) {
  std::mt19937_64 rng(config.seed);
  const WahbaProblem problem = random_wahba(rng);
  auto [Rstar, f_star] = problem.optimum();

  ProblemSetup s{problem.objective(),
                 initial_rotation(Rstar, config.init_angle, rng),
                 Eigen::VectorXd::Zero(3),
                 BregmanParams{},
                 f_star,
                 Rstar,
                 std::nullopt};
  s.params.p = config.p;
  s.params.C = config.C;
  s.params.lambda = config.lambda;
  s.params.metric = metric_from_config(config, GroupKind::SO3, 0);
  return s;
}

ProblemSetup setup_quadratic(const ExperimentConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x0(config.quad_dim);
  for (int i = 0; i < config.quad_dim; ++i) x0(i) = normal(rng);

  Objective obj;
  obj.value = [](const GroupPoint& g) { return 0.5 * g.vec().squaredNorm(); };
  obj.grad = [](const GroupPoint& g) { return g.vec(); };

  ProblemSetup s{obj,
                 GroupPoint::vector(x0),
                 Eigen::VectorXd::Zero(config.quad_dim),
                 BregmanParams{},
                 0.0,
                 GroupPoint::vector(Eigen::VectorXd::Zero(config.quad_dim)),
                 std::nullopt};
  s.params.p = config.p;
  s.params.C = config.C;
  s.params.lambda = config.lambda;
  s.params.metric = metric_from_config(config, GroupKind::Rn, config.quad_dim);
  return s;
}

ProblemSetup setup_pose(const ExperimentConfig& config) {
  std::mt19937_64 rng(config.seed);
  Eigen::Matrix3d K = Eigen::Matrix3d::Identity();
  K(0, 0) = config.fx;
  K(1, 1) = config.fy;
  K(0, 2) = config.cx;
  K(1, 2) = config.cy;

  CameraScene scene;
  Pose truth{Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()};
  if (!config.features_file.empty()) {
    scene = ingest_features(config.features_file);
    if (scene.ground_truth) truth = *scene.ground_truth;
  } else {
    scene = synth_scene(config.n_features, truth, K, rng);
  }
  scene.validate_for_solve();

  std::normal_distribution<double> normal(0.0, 1.0);
  auto unit = [&rng, &normal]() {
    Eigen::Vector3d v;
    do {
      v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
    } while (v.norm() < 1e-12);
    return Eigen::Vector3d(v.normalized());
  };
  const Eigen::Matrix3d R0 =
      truth.R * exp_so3<double>(Eigen::Vector3d(config.pose_rot_perturb * unit()));
  const Eigen::Vector3d x0 = truth.x + config.pose_trans_perturb * unit();

  const auto method = config.grad_method == "analytic"
                          ? GradientMethod::Analytic
                          : GradientMethod::FiniteDifference;
  ProblemSetup s{reprojection_objective(scene, method),
                 GroupPoint::product(R0, x0),
                 Eigen::VectorXd::Zero(6),
                 BregmanParams{},
                 0.0,
                 scene.ground_truth ? std::optional<GroupPoint>(
                                          scene.ground_truth->as_group_point())
                                    : std::nullopt,
                 scene};
  s.params.p = config.p;
  s.params.C = config.C;
  s.params.lambda = config.lambda;
  s.params.metric = metric_from_config(config, GroupKind::Product, 3);
  return s;
}

double ortho_of(const GroupPoint& g) {
  return g.has_rotation() ? orthogonality_error<double>(g.rot()) : 0.0;
}

class WallClock {
 public:
  explicit WallClock(bool enabled) : enabled_(enabled) {
    start_ = std::chrono::steady_clock::now();
  }
  double elapsed() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

ProblemSetup setup_problem(const ExperimentConfig& config) {
  switch (config.objective) {
    case ObjectiveKind::Wahba:
      return setup_wahba(config);
    case ObjectiveKind::Quadratic:
      return setup_quadratic(config);
    case ObjectiveKind::Pose:
      return setup_pose(config);
  }
  throw ParseError("setup_problem: unknown objective");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result{.rows = {}, .setup = setup_problem(config)};
  const ProblemSetup& setup = result.setup;
  const double t0 = config.t0 > 0.0 ? config.t0 : config.h0;
  const WallClock clock(config.timing);

  SolverOptions opts;
  opts.h_tolerance = config.h_tolerance;
  opts.h_min = config.h_min;
  opts.h_max = config.h_max;
  opts.max_outer_iterations = config.max_outer_iterations;
  opts.newton_tolerance = config.newton_tolerance;
  opts.trailing_theta_k = config.trailing_theta_k;

  auto done = [&](long k, double t) {
    if (config.steps > 0) return k >= config.steps;
    return t >= config.t_final;
  };
  auto push_row = [&](long k, double t, double h, const GroupPoint& g, double E,
                      int iters) {
    const double f = setup.objective.value(g);
    result.rows.push_back(TrajectoryRow{k, t, h, f, f - setup.f_star, E,
                                        ortho_of(g), iters, clock.elapsed()});
  };
  auto push_failure = [&](long k, double t, const std::string& what) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.rows.push_back(TrajectoryRow{k, t, nan, nan, nan, nan, nan, 0, 0.0});
    result.failed = true;
    result.failure = what;
  };
  // Bounded snapshot storage; the handoff residual is accumulated online for
  // arbitrarily long runs.
  const bool keep_states =
      config.steps > 0 && config.steps <= 20000 &&
      config.integrator == IntegratorKind::Lgvi;

  switch (config.integrator) {
    case IntegratorKind::Lgvi: {
      ExtendedState state =
          lgvi_init(t0, setup.g0, setup.mu0, config.h0, setup.params,
                    setup.objective, opts);
      push_row(0, state.t, config.h0, state.g, state.E, 0);
      if (keep_states) result.states.push_back(state);
      double h_prev = config.h0;
      struct PrevStep {
        double t, h;
        GroupPoint g, f;
      };
      std::optional<PrevStep> prev;
      for (long k = 1; !done(k - 1, state.t); ++k) {
        ExtendedState next = state;
        StepRecord rec;
        try {
          std::tie(next, rec) =
              lgvi_step(state, setup.params, setup.objective, opts, h_prev);
        } catch (const std::exception& e) {
          push_failure(k, state.t, e.what());
          break;
        }
        // Recompute the energy handoff from trajectory data alone.
        const GroupPoint f_k = compose(inverse(state.g), next.g);
        const double E_minus_k = discrete_energy_minus(
            state.t, rec.h, state.g, f_k, setup.params, setup.objective);
        if (prev) {
          const double E_plus_prev = discrete_energy_plus(
              prev->t, prev->h, prev->g, prev->f, setup.params, setup.objective);
          result.max_handoff_residual = std::max(
              result.max_handoff_residual, std::abs(E_plus_prev - E_minus_k));
          ++result.handoff_count;
        }
        prev = PrevStep{state.t, rec.h, state.g, f_k};
        result.mean_h_accum += rec.h;
        ++result.step_count;
        state = next;
        h_prev = rec.h;
        if (keep_states) {
          result.states.push_back(state);
          result.relative_updates.push_back(f_k);
        }
        if (k % config.log_every == 0 || done(k, state.t)) {
          push_row(k, state.t, rec.h, state.g, state.E, rec.outer_iterations);
        }
      }
      result.final_g = state.g;
      break;
    }
    case IntegratorKind::Elgvi: {
      ElgviState state{t0, setup.g0, setup.mu0};
      push_row(0, state.t, config.h0, state.g, 0.0, 0);
      for (long k = 1; !done(k - 1, state.t); ++k) {
        try {
          state = elgvi_step(state, config.h0, setup.params, setup.objective, opts);
        } catch (const std::exception& e) {
          push_failure(k, state.t, e.what());
          break;
        }
        result.mean_h_accum += config.h0;
        ++result.step_count;
        if (k % config.log_every == 0 || done(k, state.t)) {
          push_row(k, state.t, config.h0, state.g, 0.0, 0);
        }
      }
      result.final_g = state.g;
      break;
    }
    case IntegratorKind::Splt: {
      SpltState state{t0, setup.g0.rot(),
                      Eigen::Vector3d(setup.params.metric.solve(setup.mu0))};
      auto as_group = [](const SpltState& s) {
        return GroupPoint::rotation_unchecked(s.R);
      };
      push_row(0, state.t, config.h0, as_group(state), 0.0, 0);
      for (long k = 1; !done(k - 1, state.t); ++k) {
        try {
          state = splt_step(state, config.h0, setup.params, setup.objective);
        } catch (const std::exception& e) {
          push_failure(k, state.t, e.what());
          break;
        }
        result.mean_h_accum += config.h0;
        ++result.step_count;
        if (k % config.log_every == 0 || done(k, state.t)) {
          push_row(k, state.t, config.h0, as_group(state), 0.0, 0);
        }
      }
      result.final_g = as_group(state);
      break;
    }
    case IntegratorKind::Rk4: {
      const OdeRhs rhs = embedded_so3_bregman_rhs(setup.params, setup.objective);
      double t = t0;
      Eigen::VectorXd y =
          embed_so3_state(setup.g0.rot(),
                          Eigen::Vector3d(setup.params.metric.solve(setup.mu0)));
      auto as_group = [](const Eigen::VectorXd& y) {
        Eigen::Matrix3d R;
        Eigen::Vector3d w;
        unembed_so3_state(y, R, w);
        return GroupPoint::rotation_unchecked(R);
      };
      push_row(0, t, config.h0, as_group(y), 0.0, 0);
      for (long k = 1; !done(k - 1, t); ++k) {
        y = rk4_step(rhs, t, y, config.h0);
        t += config.h0;
        result.mean_h_accum += config.h0;
        ++result.step_count;
        if (k % config.log_every == 0 || done(k, t)) {
          push_row(k, t, config.h0, as_group(y), 0.0, 0);
        }
      }
      result.final_g = as_group(y);
      break;
    }
    case IntegratorKind::Rk45: {
      const OdeRhs rhs = embedded_so3_bregman_rhs(setup.params, setup.objective);
      Rk45Options rk_opts;
      rk_opts.abs_tol = config.rk_tol;
      rk_opts.rel_tol = config.rk_tol;
      rk_opts.h_init = config.h0;
      const Eigen::VectorXd y0 =
          embed_so3_state(setup.g0.rot(),
                          Eigen::Vector3d(setup.params.metric.solve(setup.mu0)));
      OdeTrajectory traj;
      try {
        traj = rk45_integrate(rhs, t0, y0, config.t_final, rk_opts);
      } catch (const std::exception& e) {
        push_failure(0, t0, e.what());
        break;
      }
      auto as_group = [](const Eigen::VectorXd& y) {
        Eigen::Matrix3d R;
        Eigen::Vector3d w;
        unembed_so3_state(y, R, w);
        return GroupPoint::rotation_unchecked(R);
      };
      for (size_t i = 0; i < traj.t.size(); ++i) {
        const double h = i == 0 ? config.h0 : traj.t[i] - traj.t[i - 1];
        if (i > 0) {
          result.mean_h_accum += h;
          ++result.step_count;
        }
        const long k = static_cast<long>(i);
        if (k % config.log_every == 0 || i + 1 == traj.t.size()) {
          push_row(k, traj.t[i], h, as_group(traj.y[i]), 0.0, 0);
        }
      }
      result.final_g = as_group(traj.y.back());
      break;
    }
  }

  if (!config.out.empty()) {
    write_trajectory_csv(config.out, result.rows, result.failed);
  }
  return result;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectoryRow>& rows, bool failed) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file '" + path + "'");
  out << "k,t,h,f,f_gap,E,ortho_err,solver_iters,wall_s\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.k, r.t,
                  r.h, r.f, r.f_gap, r.E, r.ortho_err, r.solver_iters, r.wall_s);
    out << buf;
  }
  (void)failed;
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trajectory CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line) ||
      line != "k,t,h,f,f_gap,E,ortho_err,solver_iters,wall_s") {
    throw ParseError("'" + path + "': missing or unexpected CSV header");
  }
  std::vector<TrajectoryRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw ParseError("'" + path + "' line " + std::to_string(lineno) +
                       ": expected 9 fields");
    }
    try {
      TrajectoryRow r;
      r.k = std::stol(fields[0]);
      r.t = std::stod(fields[1]);
      r.h = std::stod(fields[2]);
      r.f = std::stod(fields[3]);
      r.f_gap = std::stod(fields[4]);
      r.E = std::stod(fields[5]);
      r.ortho_err = std::stod(fields[6]);
      r.solver_iters = std::stoi(fields[7]);
      r.wall_s = std::stod(fields[8]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw ParseError("'" + path + "' line " + std::to_string(lineno) +
                       ": bad numeric field");
    }
  }
  return rows;
}

}  // namespace lgvi
