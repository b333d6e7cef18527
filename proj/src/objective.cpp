#include "lgvi/objective.hpp"

namespace lgvi {

Eigen::VectorXd numeric_left_gradient(
    const std::function<double(const GroupPoint&)>& f, const GroupPoint& g,
    double step) {
  const int n = g.algebra_dim();
  Eigen::VectorXd grad(n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    e(i) = step;
    const double fp = f(compose(g, group_exp(g.kind(), e)));
    e(i) = -step;
    const double fm = f(compose(g, group_exp(g.kind(), e)));
    e(i) = 0.0;
    grad(i) = (fp - fm) / (2.0 * step);
  }
  return grad;
}

Objective make_numeric_objective(std::function<double(const GroupPoint&)> f,
                                 double step) {
  Objective obj;
  obj.value = f;
  obj.grad = [f, step](const GroupPoint& g) {
    return numeric_left_gradient(f, g, step);
  };
  return obj;
}

}  // namespace lgvi
