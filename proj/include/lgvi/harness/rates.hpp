#pragma once

#include <utility>
#include <vector>

namespace lgvi {

/// Least-squares slope of log(value) vs log(abscissa) over points whose
/// abscissa lies in [x_lo, x_hi]. Requires at least 10 points in the window
/// and strictly positive values (domain error otherwise).
double fit_rate(const std::vector<std::pair<double, double>>& series,
                double x_lo, double x_hi);

/// Convenience: window = the final decade [x_max/10, x_max] of the series.
double fit_rate_last_decade(const std::vector<std::pair<double, double>>& series);

}  // namespace lgvi
