#include "lgvi/harness/compare.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lgvi/errors.hpp"

namespace lgvi {

CompareReport compare_integrators(const std::vector<ExperimentConfig>& configs,
                                  int repetitions, int grid_points) {
  if (configs.empty()) {
    throw std::invalid_argument("compare_integrators: empty config list");
  }
  for (const auto& c : configs) {
    if (c.objective != configs.front().objective || c.seed != configs.front().seed) {
      throw std::invalid_argument(
          "compare_integrators: configs must share objective and seed");
    }
  }

  CompareReport report;
  double t_lo = 0.0, t_hi = std::numeric_limits<double>::max();
  for (const auto& config : configs) {
    ExperimentConfig c = config;
    c.out.clear();  // the merged report owns file output
    ExperimentResult res = run_experiment(c);

    double wall_sum = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      (void)run_experiment(c);
      wall_sum += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                start)
                      .count();
    }

    MethodSummary s{.method = to_string(c.integrator),
                    .terminal_f_gap = res.rows.back().f_gap,
                    .max_ortho_err = 0.0,
                    .final_t = res.rows.back().t,
                    .steps = res.rows.back().k,
                    .wall_mean_s = repetitions > 0 ? wall_sum / repetitions : 0.0,
                    .result = std::move(res)};
    for (const auto& r : s.result.rows) {
      if (std::isfinite(r.ortho_err)) {
        s.max_ortho_err = std::max(s.max_ortho_err, r.ortho_err);
      }
    }
    report.methods.push_back(std::move(s));

    t_lo = std::max(t_lo, report.methods.back().result.rows.front().t);
    t_hi = std::min(t_hi, report.methods.back().result.rows.back().t);
  }

  // Common geometric grid across the overlapping time range.
  if (t_lo > 0.0 && t_hi > t_lo) {
    for (int i = 0; i < grid_points; ++i) {
      const double frac = static_cast<double>(i) / (grid_points - 1);
      report.t_grid.push_back(t_lo * std::pow(t_hi / t_lo, frac));
    }
    for (const auto& m : report.methods) {
      std::vector<double> fg, oe;
      size_t j = 0;
      const auto& rows = m.result.rows;
      for (const double t : report.t_grid) {
        while (j + 1 < rows.size() && rows[j + 1].t <= t) ++j;
        fg.push_back(rows[j].f_gap);
        oe.push_back(rows[j].ortho_err);
      }
      report.f_gap_by_method.push_back(std::move(fg));
      report.ortho_by_method.push_back(std::move(oe));
    }
  }
  return report;
}

void write_compare_csv(const std::string& path, const CompareReport& report) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open compare CSV '" + path + "'");
  out << "t";
  for (const auto& m : report.methods) {
    out << ",f_gap_" << m.method << ",ortho_err_" << m.method;
  }
  out << "\n";
  char buf[64];
  for (size_t i = 0; i < report.t_grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", report.t_grid[i]);
    out << buf;
    for (size_t m = 0; m < report.methods.size(); ++m) {
      std::snprintf(buf, sizeof(buf), ",%.17g", report.f_gap_by_method[m][i]);
      out << buf;
      std::snprintf(buf, sizeof(buf), ",%.17g", report.ortho_by_method[m][i]);
      out << buf;
    }
    out << "\n";
  }
}

std::string format_compare_summary(const CompareReport& report) {
  std::stringstream ss;
  ss << "method    terminal_f_gap    max_ortho_err     final_t     steps   wall_mean_s\n";
  char buf[256];
  for (const auto& m : report.methods) {
    std::snprintf(buf, sizeof(buf), "%-8s %15.6e %15.6e %11.4g %9ld %13.4f\n",
                  m.method.c_str(), m.terminal_f_gap, m.max_ortho_err, m.final_t,
                  m.steps, m.wall_mean_s);
    ss << buf;
  }
  return ss.str();
}

}  // namespace lgvi
