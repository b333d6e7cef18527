#pragma once

#include <Eigen/Dense>

#include <functional>

#include "lgvi/group.hpp"

namespace lgvi {

/// Objective on a group together with its left-trivialized gradient
/// (coordinates in the algebra under the dot pairing).
struct Objective {
  std::function<double(const GroupPoint&)> value;
  std::function<Eigen::VectorXd(const GroupPoint&)> grad;
};

/// Central finite-difference left-trivialized gradient along the algebra
/// basis directions of g: d/ds f(g exp(s e_i)) at s = 0.
Eigen::VectorXd numeric_left_gradient(
    const std::function<double(const GroupPoint&)>& f, const GroupPoint& g,
    double step = 1e-6);

/// Wraps a value function with its finite-difference gradient.
Objective make_numeric_objective(std::function<double(const GroupPoint&)> f,
                                 double step = 1e-6);

}  // namespace lgvi
