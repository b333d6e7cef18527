// Experiment CLI: accelerated optimization on SO(3), R^n, and SO(3) x R^3
// via extended Lie group variational integrators, with baselines and
// convergence-rate reporting.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "lgvi/errors.hpp"
#include "lgvi/harness/compare.hpp"
#include "lgvi/harness/config.hpp"
#include "lgvi/harness/experiment.hpp"
#include "lgvi/harness/feature_file.hpp"
#include "lgvi/harness/rates.hpp"
#include "lgvi/wahba.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitInvalidInput = 2;

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> sets;  // key=value overrides
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "config file (key = value lines)");
  cmd->add_option("--set", args.sets,
                  "override any config key as key=value (repeatable)")
      ->take_all();
}

lgvi::ExperimentConfig build_config(const CommonArgs& args) {
  lgvi::ExperimentConfig config;
  if (!args.config_file.empty()) {
    lgvi::apply_config_entries(config, lgvi::parse_config_file(args.config_file));
  }
  std::map<std::string, std::string> overrides;
  for (const auto& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw lgvi::ParseError("--set expects key=value, got '" + kv + "'");
    }
    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  lgvi::apply_config_entries(config, overrides);
  return config;
}

int report_run(const lgvi::ExperimentResult& result) {
  const auto& last = result.rows.back();
  std::printf("steps=%ld  t=%.6g  f=%.10g  f_gap=%.6e  ortho_err=%.3e\n", last.k,
              last.t, last.f, last.f_gap, last.ortho_err);
  if (result.failed) {
    std::cerr << "step failure: " << result.failure << "\n";
    return kExitSolverFailure;
  }
  return kExitOk;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended Lie group variational integrators for accelerated optimization"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, compare_args, pose_args, synth_args;

  auto* run_cmd = app.add_subcommand("run", "single experiment from config");
  add_common(run_cmd, run_args);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "grid over p, h0, and seeds; one CSV each");
  add_common(sweep_cmd, sweep_args);
  std::string sweep_p = "2,4,6,8", sweep_h0 = "0.1", sweep_seeds = "0";
  std::string sweep_outdir = ".";
  sweep_cmd->add_option("--p-list", sweep_p, "comma list of p values");
  sweep_cmd->add_option("--h0-list", sweep_h0, "comma list of h0 values");
  sweep_cmd->add_option("--seed-list", sweep_seeds, "comma list of seeds");
  sweep_cmd->add_option("--outdir", sweep_outdir, "output directory");

  auto* compare_cmd =
      app.add_subcommand("compare", "multi-integrator comparison report");
  add_common(compare_cmd, compare_args);
  std::string methods = "elgvi,splt,rk4,rk45";
  std::string compare_out = "compare.csv";
  int repetitions = 1;
  compare_cmd->add_option("--methods", methods, "comma list of integrators");
  compare_cmd->add_option("--out-csv", compare_out, "aligned report CSV path");
  compare_cmd->add_option("--repetitions", repetitions,
                          "wall-time averaging repetitions");

  auto* rates_cmd = app.add_subcommand("rates", "fit a power-law exponent on a CSV");
  std::string rates_csv, rates_column = "f_gap", rates_abscissa = "t";
  double rates_xlo = 0.0, rates_xhi = 0.0;
  bool rates_last_decade = false;
  rates_cmd->add_option("csv", rates_csv, "trajectory CSV")->required();
  rates_cmd->add_option("--column", rates_column, "value column: f_gap|f|h|E");
  rates_cmd->add_option("--abscissa", rates_abscissa, "abscissa column: t|k");
  rates_cmd->add_option("--x-lo", rates_xlo, "window lower bound");
  rates_cmd->add_option("--x-hi", rates_xhi, "window upper bound");
  rates_cmd->add_flag("--last-decade", rates_last_decade,
                      "use the final decade of the abscissa");

  auto* pose_cmd = app.add_subcommand(
      "pose", "pose estimation on a feature file or synthetic scene");
  add_common(pose_cmd, pose_args);

  auto* synth_cmd = app.add_subcommand("synth", "emit a synthetic feature file");
  add_common(synth_cmd, synth_args);
  std::string synth_out = "scene.txt";
  synth_cmd->add_option("--out-file", synth_out, "feature file path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto config = build_config(run_args);
      config.validate();
      return report_run(lgvi::run_experiment(config));
    }

    if (sweep_cmd->parsed()) {
      auto base = build_config(sweep_args);
      int failures = 0;
      std::printf("p,h0,seed,mean_h,rate_t,rate_k,out\n");
      for (const double p : parse_list(sweep_p)) {
        for (const double h0 : parse_list(sweep_h0)) {
          for (const double seed : parse_list(sweep_seeds)) {
            auto config = base;
            config.p = p;
            config.h0 = h0;
            config.seed = static_cast<std::uint64_t>(seed);
            char name[256];
            std::snprintf(name, sizeof(name), "%s/traj_p%g_h%g_s%llu.csv",
                          sweep_outdir.c_str(), p, h0,
                          static_cast<unsigned long long>(config.seed));
            config.out = name;
            config.validate();
            const auto result = lgvi::run_experiment(config);
            if (result.failed) {
              ++failures;
              std::cerr << name << ": " << result.failure << "\n";
              continue;
            }
            std::vector<std::pair<double, double>> by_t, by_k;
            for (const auto& r : result.rows) {
              if (r.f_gap > 0.0) {
                by_t.emplace_back(r.t, r.f_gap);
                if (r.k > 0) by_k.emplace_back(static_cast<double>(r.k), r.f_gap);
              }
            }
            const double rate_t = lgvi::fit_rate_last_decade(by_t);
            const double rate_k = lgvi::fit_rate_last_decade(by_k);
            std::printf("%g,%g,%llu,%.6e,%.4f,%.4f,%s\n", p, h0,
                        static_cast<unsigned long long>(config.seed),
                        result.mean_h(), rate_t, rate_k, name);
          }
        }
      }
      return failures == 0 ? kExitOk : kExitSolverFailure;
    }

    if (compare_cmd->parsed()) {
      auto base = build_config(compare_args);
      std::vector<lgvi::ExperimentConfig> configs;
      std::stringstream ss(methods);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        auto c = base;
        c.integrator = lgvi::integrator_from_string(tok);
        c.validate();
        configs.push_back(c);
      }
      const auto report = lgvi::compare_integrators(configs, repetitions);
      lgvi::write_compare_csv(compare_out, report);
      std::cout << lgvi::format_compare_summary(report);
      return kExitOk;
    }

    if (rates_cmd->parsed()) {
      const auto rows = lgvi::read_trajectory_csv(rates_csv);
      std::vector<std::pair<double, double>> series;
      for (const auto& r : rows) {
        const double x = rates_abscissa == "k" ? static_cast<double>(r.k) : r.t;
        double y;
        if (rates_column == "f_gap") y = r.f_gap;
        else if (rates_column == "f") y = r.f;
        else if (rates_column == "h") y = r.h;
        else if (rates_column == "E") y = r.E;
        else throw lgvi::ParseError("rates: unknown column '" + rates_column + "'");
        if (x > 0.0 && y > 0.0) series.emplace_back(x, y);
      }
      const double rate = rates_last_decade
                              ? lgvi::fit_rate_last_decade(series)
                              : lgvi::fit_rate(series, rates_xlo, rates_xhi);
      std::printf("%.6f\n", rate);
      return kExitOk;
    }

    if (pose_cmd->parsed()) {
      auto config = build_config(pose_args);
      config.objective = lgvi::ObjectiveKind::Pose;
      if (config.integrator == lgvi::IntegratorKind::Lgvi &&
          run_args.config_file.empty()) {
        config.integrator = lgvi::IntegratorKind::Elgvi;
      }
      config.validate();
      const auto result = lgvi::run_experiment(config);
      const int code = report_run(result);
      if (result.final_g && result.setup.g_star) {
        const auto pose = lgvi::Pose::from_group_point(*result.final_g);
        const double n = static_cast<double>(result.setup.scene->features.size());
        std::printf("mean reprojection error: %.6e px^2/feature\n",
                    result.rows.back().f / n);
        const double rot_err =
            lgvi::log_so3<double>(
                Eigen::Matrix3d(result.setup.g_star->rot().transpose() * pose.R))
                .norm();
        std::printf("pose error vs ground truth: %.6e rad, %.6e units\n", rot_err,
                    (pose.x - result.setup.g_star->vec()).norm());
      }
      return code;
    }

    if (synth_cmd->parsed()) {
      auto config = build_config(synth_args);
      std::mt19937_64 rng(config.seed);
      Eigen::Matrix3d K = Eigen::Matrix3d::Identity();
      K(0, 0) = config.fx;
      K(1, 1) = config.fy;
      K(0, 2) = config.cx;
      K(1, 2) = config.cy;
      const lgvi::Pose truth{Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()};
      const auto scene = lgvi::synth_scene(config.n_features, truth, K, rng);
      lgvi::write_features(synth_out, scene);
      std::printf("wrote %zu features to %s\n", scene.features.size(),
                  synth_out.c_str());
      return kExitOk;
    }
  } catch (const lgvi::StepFailureError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const lgvi::ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
