#pragma once

#include <Eigen/Dense>
#include <functional>

namespace garchfis {

/// Objective callback: returns f(x) and fills `grad` with the gradient.
/// A non-finite return value makes the line search back off; the gradient
/// is ignored at such points.
using ObjectiveFn =
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct BfgsOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-6;  // Euclidean norm of the gradient
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient tolerance reached
  bool failed = false;     // objective non-finite at the starting point
};

/// Dense BFGS minimizer with a strong-Wolfe line search. Returns the best
/// point visited; monotone in the objective along accepted steps.
BfgsResult minimize_bfgs(const ObjectiveFn& fn, Eigen::VectorXd x0,
                         const BfgsOptions& options = {});

}  // namespace garchfis
