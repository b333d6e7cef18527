#include "lgvi/integrators.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace lgvi {

double discrete_kinetic(const GroupPoint& f, const MetricOperator& metric) {
  double T = 0.0;
  if (f.has_rotation()) {
    const Eigen::Matrix3d& F = f.rot();
    const Eigen::Matrix3d& Jd = metric.jd();
    const double c = 0.5 * (F.trace() - 1.0);
    if (c > -0.9) {
      // tr((I - F) Jd) = (1 - cos a)(tr Jd - u' Jd u) for F = exp(a u^). The
      // skew part w = sin(a) u keeps full precision near the identity, where
      // forming I - F directly would cancel; 1 - cos a = |w|^2 / (1 + cos a).
      const Eigen::Vector3d w(0.5 * (F(2, 1) - F(1, 2)), 0.5 * (F(0, 2) - F(2, 0)),
                              0.5 * (F(1, 0) - F(0, 1)));
      T += (w.squaredNorm() * Jd.trace() - w.dot(Jd * w)) / (1.0 + c);
    } else {
      T += ((Eigen::Matrix3d::Identity() - F) * Jd).trace();
    }
  }
  if (f.has_vector()) {
    T += 0.5 * f.vec().dot(metric.vec_block() * f.vec());
  }
  return T;
}

double discrete_lagrangian(double t_k, double t_kp1, const GroupPoint& g_k,
                           const GroupPoint& f_k, const BregmanParams& params,
                           const Objective& objective) {
  if (t_kp1 <= t_k) throw std::domain_error("discrete_lagrangian: t_{k+1} <= t_k");
  const double h = t_kp1 - t_k;
  const double t_mid = t_k + 0.5 * h;
  const double Td = discrete_kinetic(f_k, params.metric);
  return phi(params, t_mid) / h * Td -
         0.5 * h * theta(params, t_k) * objective.value(g_k) -
         0.5 * h * theta(params, t_kp1) * objective.value(compose(g_k, f_k));
}

std::pair<Eigen::Matrix3d, int> solve_relative_rotation(
    const Eigen::Vector3d& b, const Eigen::Matrix3d& Jd,
    RotationSolveMethod method, double newton_tolerance,
    const Eigen::Vector3d* initial_guess) {
  if (method == RotationSolveMethod::Explicit) {
    // J = c I gives J_d = (c/2) I and (F J_d - J_d F^T)^vee = c sin|x| x/|x|.
    const double c = 2.0 * Jd(0, 0);
    const Eigen::Vector3d a = b / c;
    const double na = a.norm();
    if (na >= 1.0 - 1e-12) throw StepTooLargeError(na);
    const double scale = na < 1e-12 ? 1.0 : std::asin(na) / na;
    return {exp_so3<double>(Eigen::Vector3d(scale * a)), 0};
  }

  // Newton on exponential coordinates for general SPD J.
  auto residual = [&](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    const Eigen::Matrix3d F = exp_so3<double>(x);
    const Eigen::Matrix3d S = F * Jd - Jd * F.transpose();
    return Eigen::Vector3d(S(2, 1), S(0, 2), S(1, 0)) - b;
  };
  Eigen::Vector3d x;
  if (initial_guess != nullptr) {
    x = *initial_guess;
  } else {
    const double c = (2.0 / 3.0) * Jd.trace();
    Eigen::Vector3d a = b / c;
    double na = a.norm();
    if (na >= 1.0 - 1e-9) a *= (1.0 - 1e-9) / na;
    na = a.norm();
    x = na < 1e-12 ? a : Eigen::Vector3d(std::asin(na) / na * a);
  }
  constexpr int kMaxIters = 50;
  constexpr double kFdStep = 1e-7;
  for (int iter = 1; iter <= kMaxIters; ++iter) {
    const Eigen::Vector3d r = residual(x);
    if (r.norm() <= newton_tolerance) return {exp_so3<double>(x), iter - 1};
    Eigen::Matrix3d Jac;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d dx = Eigen::Vector3d::Zero();
      dx(j) = kFdStep;
      Jac.col(j) = (residual(x + dx) - residual(x - dx)) / (2.0 * kFdStep);
    }
    x -= Jac.fullPivLu().solve(r);
  }
  const double r_final = residual(x).norm();
  if (r_final <= newton_tolerance) return {exp_so3<double>(x), kMaxIters};
  throw ConvergenceError("solve_relative_rotation: Newton stalled at residual " +
                         std::to_string(r_final));
}

std::pair<GroupPoint, int> solve_relative_update(
    double t_k, double h, const GroupPoint& g_k, const Eigen::VectorXd& mu_k,
    const Eigen::VectorXd& grad_k, const BregmanParams& params,
    const SolverOptions& opts) {
  const double phi_mid = phi(params, t_k + 0.5 * h);
  const double theta_k = theta(params, t_k);
  // b = (h/phi_mid)(mu - (h theta_k / 2) grad); the momentum equation reduces
  // to (F J_d - J_d F^T)^vee = b_rot and J dx = b_vec.
  const Eigen::VectorXd b = (h / phi_mid) * (mu_k - 0.5 * h * theta_k * grad_k);

  int newton_iters = 0;
  Eigen::Matrix3d F = Eigen::Matrix3d::Identity();
  if (g_k.has_rotation()) {
    const auto method = params.metric.rotation_isotropic()
                            ? RotationSolveMethod::Explicit
                            : RotationSolveMethod::Newton;
    auto [Fk, iters] = solve_relative_rotation(b.head<3>(), params.metric.jd(),
                                               method, opts.newton_tolerance);
    F = Fk;
    newton_iters = iters;
  }

  switch (g_k.kind()) {
    case GroupKind::SO3:
      return {GroupPoint::rotation(F), newton_iters};
    case GroupKind::Rn: {
      Eigen::VectorXd dx(params.metric.vec_block().llt().solve(b));
      return {GroupPoint::vector(dx), newton_iters};
    }
    case GroupKind::Product: {
      Eigen::VectorXd dx(
          params.metric.vec_block().llt().solve(b.tail(b.size() - 3).eval()));
      return {GroupPoint::product(F, dx), newton_iters};
    }
  }
  throw std::invalid_argument("solve_relative_update: unknown kind");
}

double discrete_energy_minus(double t_k, double h, const GroupPoint& g_k,
                             const GroupPoint& f_k, const BregmanParams& params,
                             const Objective& objective) {
  const double t_mid = t_k + 0.5 * h;
  const double t_kp1 = t_k + h;
  const double Td = discrete_kinetic(f_k, params.metric);
  const double fk = objective.value(g_k);
  const double fkp1 = objective.value(compose(g_k, f_k));
  return phi_prime(params, t_mid) / (2.0 * h) * Td -
         0.5 * h * theta_prime(params, t_k) * fk +
         phi(params, t_mid) / (h * h) * Td + 0.5 * theta(params, t_k) * fk +
         0.5 * theta(params, t_kp1) * fkp1;
}

double discrete_energy_plus(double t_k, double h, const GroupPoint& g_k,
                            const GroupPoint& f_k, const BregmanParams& params,
                            const Objective& objective) {
  const double t_mid = t_k + 0.5 * h;
  const double t_kp1 = t_k + h;
  const double Td = discrete_kinetic(f_k, params.metric);
  const double fk = objective.value(g_k);
  const double fkp1 = objective.value(compose(g_k, f_k));
  return -phi_prime(params, t_mid) / (2.0 * h) * Td +
         0.5 * h * theta_prime(params, t_kp1) * fkp1 +
         phi(params, t_mid) / (h * h) * Td + 0.5 * theta(params, t_k) * fk +
         0.5 * theta(params, t_kp1) * fkp1;
}

namespace {

struct MomentumSolve {
  GroupPoint f;
  double residual;  // discrete_energy_minus(h) - E_k
  int newton_iters;
};

}  // namespace

std::pair<ExtendedState, StepRecord> lgvi_step(const ExtendedState& state,
                                               const BregmanParams& params,
                                               const Objective& objective,
                                               const SolverOptions& opts,
                                               double h_guess) {
  const Eigen::VectorXd grad_k = objective.grad(state.g);
  int evals = 0;
  int newton_total = 0;

  auto try_eval = [&](double h) -> std::optional<MomentumSolve> {
    ++evals;
    try {
      auto [f, iters] =
          solve_relative_update(state.t, h, state.g, state.mu, grad_k, params, opts);
      newton_total += iters;
      const double E =
          discrete_energy_minus(state.t, h, state.g, f, params, objective);
      return MomentumSolve{f, E - state.E, iters};
    } catch (const StepTooLargeError&) {
      return std::nullopt;
    } catch (const ConvergenceError&) {
      return std::nullopt;
    }
  };

  // Two feasible starting points; smaller steps are always feasible since the
  // explicit solve's asin argument vanishes with h.
  double ha = std::min(std::max(h_guess, opts.h_min), opts.h_max);
  std::optional<MomentumSolve> ea;
  while (!(ea = try_eval(ha))) {
    ha *= 0.5;
    if (ha < opts.h_min) {
      throw StepFailureError("lgvi_step: no feasible step above h_min",
                             std::numeric_limits<double>::quiet_NaN());
    }
  }
  double best_h = ha;
  MomentumSolve best = *ea;
  auto consider = [&](double h, const MomentumSolve& e) {
    if (std::abs(e.residual) < std::abs(best.residual)) {
      best = e;
      best_h = h;
    }
  };
  bool converged = std::abs(best.residual) <= opts.h_tolerance;

  // The energy residual increases through its root: too-small steps leave
  // E_minus below E_k and too-large steps overshoot it. March geometrically
  // away from the guess until a sign change is bracketed, then bisect. The
  // first step satisfying the tolerance is accepted; refining past the
  // tolerance would shrink h far below what the energy equation asks of it.
  int iters_left = opts.max_outer_iterations;
  bool have_bracket = false;
  double lo = 0.0, hi = 0.0;
  if (!converged) {
    const bool grow = ea->residual < 0.0;
    double h_prev = ha, r_prev = ea->residual;
    double h_cur = ha;
    while (iters_left-- > 0) {
      h_cur = grow ? h_cur * 1.3 : h_cur * 0.7;
      if (h_cur < opts.h_min) {
        throw StepFailureError("lgvi_step: h fell below h_min", best.residual);
      }
      h_cur = std::min(h_cur, opts.h_max);
      const auto e = try_eval(h_cur);
      if (!e) {
        // infeasible only happens at large h; treat it like an overshoot
        if (!grow) {
          throw StepFailureError("lgvi_step: momentum solve infeasible",
                                 best.residual);
        }
        have_bracket = true;
        lo = h_prev;
        hi = h_cur;
        break;
      }
      consider(h_cur, *e);
      if (std::abs(best.residual) <= opts.h_tolerance) {
        converged = true;
        break;
      }
      if ((e->residual < 0.0) != (r_prev < 0.0)) {
        have_bracket = true;
        lo = std::min(h_prev, h_cur);
        hi = std::max(h_prev, h_cur);
        break;
      }
      if (h_cur >= opts.h_max) break;
      h_prev = h_cur;
      r_prev = e->residual;
    }
  }
  while (!converged && have_bracket && iters_left-- > 0) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto e = try_eval(mid);
    if (!e) {
      hi = mid;
      continue;
    }
    consider(mid, *e);
    if (std::abs(best.residual) <= opts.h_tolerance) {
      converged = true;
      break;
    }
    if (e->residual < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!converged) {
    throw StepFailureError("lgvi_step: energy residual did not reach tolerance",
                           best.residual);
  }

  const double h = best_h;
  const GroupPoint& f = best.f;
  const double t_kp1 = state.t + h;
  const GroupPoint g_kp1 = compose(state.g, f);
  const Eigen::VectorXd grad_kp1 = objective.grad(g_kp1);
  const double theta_k = theta(params, state.t);
  const double theta_trail = opts.trailing_theta_k ? theta_k : theta(params, t_kp1);
  const Eigen::VectorXd mu_kp1 =
      coadjoint(f, Eigen::VectorXd(state.mu - 0.5 * h * theta_k * grad_k)) -
      0.5 * h * theta_trail * grad_kp1;
  const double E_kp1 =
      discrete_energy_plus(state.t, h, state.g, f, params, objective);

  StepRecord rec;
  rec.h = h;
  rec.outer_iterations = evals;
  rec.newton_iterations = newton_total;
  rec.energy_residual = std::abs(best.residual);
  return {ExtendedState{t_kp1, E_kp1, g_kp1, mu_kp1}, rec};
}

ExtendedState lgvi_init(double t_0, const GroupPoint& g_0,
                        const Eigen::VectorXd& mu_0, double h_0,
                        const BregmanParams& params, const Objective& objective,
                        const SolverOptions& opts) {
  if (t_0 <= 0.0) throw std::domain_error("lgvi_init: t_0 must be > 0");
  if (h_0 <= 0.0) throw std::domain_error("lgvi_init: h_0 must be > 0");
  const Eigen::VectorXd grad_0 = objective.grad(g_0);
  auto [f_0, iters] =
      solve_relative_update(t_0, h_0, g_0, mu_0, grad_0, params, opts);
  (void)iters;
  const double E_0 = discrete_energy_minus(t_0, h_0, g_0, f_0, params, objective);
  return ExtendedState{t_0, E_0, g_0, mu_0};
}

ElgviState elgvi_step(const ElgviState& state, double h,
                      const BregmanParams& params, const Objective& objective,
                      const SolverOptions& opts) {
  if (h <= 0.0) throw std::domain_error("elgvi_step: h must be > 0");
  const Eigen::VectorXd grad_k = objective.grad(state.g);
  auto [f, iters] =
      solve_relative_update(state.t, h, state.g, state.mu, grad_k, params, opts);
  (void)iters;
  const double t_kp1 = state.t + h;
  const GroupPoint g_kp1 = compose(state.g, f);
  const Eigen::VectorXd grad_kp1 = objective.grad(g_kp1);
  const double theta_k = theta(params, state.t);
  const double theta_trail = opts.trailing_theta_k ? theta_k : theta(params, t_kp1);
  const Eigen::VectorXd mu_kp1 =
      coadjoint(f, Eigen::VectorXd(state.mu - 0.5 * h * theta_k * grad_k)) -
      0.5 * h * theta_trail * grad_kp1;
  return ElgviState{t_kp1, g_kp1, mu_kp1};
}

Eigen::Vector3d splt_momentum_flow(double t0, double t1, const Eigen::Vector3d& omega,
                                   const Eigen::Vector3d& grad,
                                   const BregmanParams& params) {
  const double m = params.lambda * params.p + 1.0;
  const double q = (params.lambda + 1.0) * params.p;
  const double p2C = params.C * params.p * params.p;
  const double damp = std::pow(t0 / t1, m);
  const double force =
      p2C * (std::pow(t1, q) - std::pow(t0, q)) / (q * std::pow(t1, m));
  return damp * omega - force * grad;
}

SpltState splt_step(const SpltState& state, double h, const BregmanParams& params,
                    const Objective& objective) {
  if (!params.metric.rotation_isotropic() ||
      std::abs(params.metric.rotation_scale() - 1.0) > 1e-12) {
    throw std::invalid_argument("splt_step: requires J = I");
  }
  SpltState out = state;
  out.R = state.R * exp_so3<double>(Eigen::Vector3d(0.5 * h * state.omega));
  const Eigen::Vector3d grad =
      objective.grad(GroupPoint::rotation_unchecked(out.R)).head<3>();
  out.omega = splt_momentum_flow(state.t, state.t + h, out.omega, grad, params);
  out.R = out.R * exp_so3<double>(Eigen::Vector3d(0.5 * h * out.omega));
  out.t = state.t + h;
  return out;
}

}  // namespace lgvi
