#include "lgvi/harness/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lgvi {

double fit_rate(const std::vector<std::pair<double, double>>& series,
                double x_lo, double x_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long n = 0;
  for (const auto& [x, y] : series) {
    if (x < x_lo || x > x_hi) continue;
    if (x <= 0.0) throw std::domain_error("fit_rate: nonpositive abscissa");
    if (y <= 0.0) throw std::domain_error("fit_rate: nonpositive value");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 10) {
    throw std::invalid_argument("fit_rate: need at least 10 points in window, have " +
                                std::to_string(n));
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::domain_error("fit_rate: degenerate abscissa window");
  return (n * sxy - sx * sy) / denom;
}

double fit_rate_last_decade(const std::vector<std::pair<double, double>>& series) {
  double x_max = 0.0;
  for (const auto& [x, y] : series) {
    (void)y;
    x_max = std::max(x_max, x);
  }
  return fit_rate(series, x_max / 10.0, x_max);
}

}  // namespace lgvi
