#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "garchfis/series.hpp"

namespace garchfis {

/// GARCH(1,1) parameters on percent returns. Valid iff omega > 0,
/// alpha >= 0, beta >= 0 and alpha + beta < 1 (strict).
struct GarchParams {
  double mu = 0.0;
  double omega = 1.0;
  double alpha = 0.0;
  double beta = 0.0;

  [[nodiscard]] bool valid() const noexcept;
  [[nodiscard]] double unconditional_variance() const noexcept {
    return omega / (1.0 - alpha - beta);
  }
};

struct GarchFit {
  GarchParams params;
  Eigen::VectorXd cond_variance;  // sigma_i^2 over the fitted returns; [0] is the seed
  double loglik = 0.0;
  double sigma2_forecast = 0.0;   // variance recursion applied once past the end
};

/// Fewest returns accepted by the MLE. A 4-parameter likelihood on fewer
/// observations is not meaningfully estimable; callers fall back instead.
inline constexpr int kMinGarchSample = 20;

/// Upper bound enforced on alpha + beta by the fitter's parameterization.
inline constexpr double kStationarityMargin = 0.999;

/// Gaussian log-likelihood of the returns under the variance recursion
/// seeded at `initial_variance`. Every observation contributes, the first
/// with the seed variance.
double garch_loglik(const GarchParams& params, const ReturnSeries& returns,
                    double initial_variance);

/// Log-likelihood plus its gradient with respect to (mu, omega, alpha, beta),
/// accumulated through the variance recursion.
double garch_loglik_grad(const GarchParams& params, const ReturnSeries& returns,
                         double initial_variance, Eigen::Vector4d& grad);

/// Conditional-variance path of the recursion (element 0 is the seed).
Eigen::VectorXd conditional_variance_path(const GarchParams& params,
                                          const ReturnSeries& returns,
                                          double initial_variance);

/// Constrained maximum-likelihood fit.
///
/// The constraints are built into an unconstrained reparameterization:
///   omega = exp(a),  alpha = s * g(b),  beta = s * (1 - g(b)),
///   s = kStationarityMargin * g(c),  g = logistic,
/// optimized with BFGS from mu0 = sample mean, (alpha0, beta0) = (0.1, 0.8),
/// omega0 = sample variance * 0.1, with up to 3 deterministic perturbed
/// restarts on failure. The recursion seed is the sample variance of the
/// returns (floored at 1e-12). `seed` only influences restart perturbations.
GarchFit fit_garch(const ReturnSeries& returns, std::uint64_t seed = 0);

/// Variance recursion with the squared shock replaced by its expectation;
/// iterating converges to omega / (1 - alpha - beta).
inline double iterate_variance(const GarchParams& p, double sigma2) noexcept {
  return p.omega + (p.alpha + p.beta) * sigma2;
}

/// Conditional volatility rescaled to price units: window_mean * sqrt(sigma2) / 100.
double price_volatility(double sigma2, double window_mean);

}  // namespace garchfis
