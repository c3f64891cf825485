#include "garchfis/bfgs.hpp"

#include <cmath>

namespace garchfis {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr double kCurvatureC2 = 0.9;
constexpr double kMaxStep = 1e3;
constexpr int kMaxLineIters = 30;

struct LinePoint {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative along d
};

struct LineSearchState {
  const ObjectiveFn& fn;
  const Eigen::VectorXd& x;
  const Eigen::VectorXd& d;
  Eigen::VectorXd* x_out;
  Eigen::VectorXd* g_out;

  // Evaluates phi(alpha); slope is NaN when f is non-finite.
  LinePoint eval(double alpha) {
    *x_out = x + alpha * d;
    const double f = fn(*x_out, *g_out);
    if (!std::isfinite(f)) {
      return {alpha, f, std::numeric_limits<double>::quiet_NaN()};
    }
    return {alpha, f, g_out->dot(d)};
  }
};

// Bisection zoom between a low point satisfying Armijo and a high bound
// (Nocedal & Wright alg. 3.6, interpolation replaced by bisection).
bool zoom(LineSearchState& ls, LinePoint lo, double hi, const LinePoint& p0,
          LinePoint& accepted) {
  for (int i = 0; i < kMaxLineIters; ++i) {
    const double mid = 0.5 * (lo.alpha + hi);
    LinePoint p = ls.eval(mid);
    if (!std::isfinite(p.f) || p.f > p0.f + kArmijoC1 * mid * p0.slope ||
        p.f >= lo.f) {
      hi = mid;
      continue;
    }
    if (std::abs(p.slope) <= -kCurvatureC2 * p0.slope) {
      accepted = p;
      return true;
    }
    if (p.slope * (hi - lo.alpha) >= 0.0) hi = lo.alpha;
    lo = p;
  }
  // Interval collapsed without meeting the curvature condition; accept the
  // best Armijo point if it improves on alpha = 0.
  if (lo.alpha > 0.0 && lo.f < p0.f) {
    accepted = ls.eval(lo.alpha);
    return std::isfinite(accepted.f);
  }
  return false;
}

bool line_search_strong_wolfe(LineSearchState& ls, const LinePoint& p0,
                              LinePoint& accepted) {
  LinePoint prev = p0;
  double alpha = 1.0;
  for (int i = 0; i < kMaxLineIters; ++i) {
    LinePoint p = ls.eval(alpha);
    if (!std::isfinite(p.f) || p.f > p0.f + kArmijoC1 * alpha * p0.slope ||
        (i > 0 && p.f >= prev.f)) {
      return zoom(ls, prev, alpha, p0, accepted);
    }
    if (std::abs(p.slope) <= -kCurvatureC2 * p0.slope) {
      accepted = p;
      return true;
    }
    if (p.slope >= 0.0) {
      return zoom(ls, p, prev.alpha, p0, accepted);
    }
    prev = p;
    alpha = std::min(2.0 * alpha, kMaxStep);
    if (alpha == prev.alpha) break;
  }
  return false;
}

}  // namespace

BfgsResult minimize_bfgs(const ObjectiveFn& fn, Eigen::VectorXd x0,
                         const BfgsOptions& options) {
  const Eigen::Index n = x0.size();
  BfgsResult result;
  result.x = x0;

  Eigen::VectorXd grad(n);
  double f = fn(x0, grad);
  if (!std::isfinite(f)) {
    result.failed = true;
    result.value = f;
    return result;
  }

  Eigen::VectorXd x = std::move(x0);
  Eigen::MatrixXd hessian_inv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x_trial(n), g_trial(n);

  result.value = f;
  result.gradient_norm = grad.norm();
  bool first_update = true;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter;
    if (grad.norm() <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd direction = -(hessian_inv * grad);
    double slope = direction.dot(grad);
    if (!(slope < 0.0)) {
      // numerical loss of positive definiteness
      hessian_inv.setIdentity();
      direction = -grad;
      slope = -grad.squaredNorm();
      first_update = true;
    }

    LineSearchState ls{fn, x, direction, &x_trial, &g_trial};
    LinePoint p0{0.0, f, slope};
    LinePoint accepted;
    if (!line_search_strong_wolfe(ls, p0, accepted)) break;

    const Eigen::VectorXd step = accepted.alpha * direction;
    const Eigen::VectorXd y = g_trial - grad;
    x += step;
    f = accepted.f;
    grad = g_trial;

    if (f < result.value) {
      result.x = x;
      result.value = f;
      result.gradient_norm = grad.norm();
    }

    const double sy = y.dot(step);
    if (sy > 1e-10 * step.norm() * y.norm()) {
      if (first_update) {
        hessian_inv = (sy / y.squaredNorm()) * Eigen::MatrixXd::Identity(n, n);
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = hessian_inv * y;
      hessian_inv += (rho * rho * (sy + y.dot(hy))) * (step * step.transpose()) -
                     rho * (hy * step.transpose() + step * hy.transpose());
    }
  }

  result.gradient_norm = grad.norm();
  if (grad.norm() <= options.gradient_tolerance) result.converged = true;
  return result;
}

}  // namespace garchfis
