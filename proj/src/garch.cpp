#include "garchfis/garch.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "garchfis/bfgs.hpp"

namespace garchfis {

namespace {

constexpr double kVarianceFloor = 1e-12;

double logistic(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) noexcept { return std::log(p / (1.0 - p)); }

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) noexcept {
  return 2.0 * (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

void check_loglik_inputs(const GarchParams& params, double initial_variance) {
  if (!params.valid()) {
    fail(Errc::kInvalidParams,
         "GARCH parameters violate positivity/stationarity constraints");
  }
  if (!(initial_variance > 0.0)) {
    fail(Errc::kNonPositiveInitialVariance,
         "variance recursion seed must be > 0");
  }
}

GarchParams unpack(const Eigen::VectorXd& x) {
  const double gb = logistic(x(2));
  const double s = kStationarityMargin * logistic(x(3));
  return {x(0), std::exp(x(1)), s * gb, s * (1.0 - gb)};
}

Eigen::VectorXd pack(double mu, double omega, double alpha, double beta) {
  const double s = alpha + beta;
  Eigen::VectorXd x(4);
  x << mu, std::log(omega), logit(alpha / s), logit(s / kStationarityMargin);
  return x;
}

}  // namespace

bool GarchParams::valid() const noexcept {
  return std::isfinite(mu) && std::isfinite(omega) && std::isfinite(alpha) &&
         std::isfinite(beta) && omega > 0.0 && alpha >= 0.0 && beta >= 0.0 &&
         alpha + beta < 1.0;
}

Eigen::VectorXd conditional_variance_path(const GarchParams& params,
                                          const ReturnSeries& returns,
                                          double initial_variance) {
  check_loglik_inputs(params, initial_variance);
  const Eigen::Index n = returns.size();
  Eigen::VectorXd sigma2(n);
  sigma2(0) = initial_variance;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double eps = returns[i - 1] - params.mu;
    sigma2(i) = params.omega + params.alpha * eps * eps + params.beta * sigma2(i - 1);
  }
  return sigma2;
}

double garch_loglik(const GarchParams& params, const ReturnSeries& returns,
                    double initial_variance) {
  check_loglik_inputs(params, initial_variance);
  const Eigen::Index n = returns.size();
  constexpr double ln2pi = 1.8378770664093453;  // ln(2*pi)
  double sigma2 = initial_variance;
  double loglik = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) {
      const double eps_prev = returns[i - 1] - params.mu;
      sigma2 = params.omega + params.alpha * eps_prev * eps_prev + params.beta * sigma2;
    }
    const double eps = returns[i] - params.mu;
    loglik += -0.5 * (ln2pi + std::log(sigma2) + eps * eps / sigma2);
  }
  return loglik;
}

double garch_loglik_grad(const GarchParams& params, const ReturnSeries& returns,
                         double initial_variance, Eigen::Vector4d& grad) {
  check_loglik_inputs(params, initial_variance);
  const Eigen::Index n = returns.size();
  constexpr double ln2pi = 1.8378770664093453;

  double sigma2 = initial_variance;
  // d sigma^2 / d (mu, omega, alpha, beta); the seed does not depend on theta
  double ds_mu = 0.0, ds_om = 0.0, ds_al = 0.0, ds_be = 0.0;
  double loglik = 0.0;
  grad.setZero();

  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) {
      const double eps_prev = returns[i - 1] - params.mu;
      ds_mu = -2.0 * params.alpha * eps_prev + params.beta * ds_mu;
      ds_om = 1.0 + params.beta * ds_om;
      ds_al = eps_prev * eps_prev + params.beta * ds_al;
      ds_be = sigma2 + params.beta * ds_be;
      sigma2 = params.omega + params.alpha * eps_prev * eps_prev + params.beta * sigma2;
    }
    const double eps = returns[i] - params.mu;
    const double inv = 1.0 / sigma2;
    loglik += -0.5 * (ln2pi + std::log(sigma2) + eps * eps * inv);
    const double dl_ds = -0.5 * (inv - eps * eps * inv * inv);
    grad(0) += eps * inv + dl_ds * ds_mu;
    grad(1) += dl_ds * ds_om;
    grad(2) += dl_ds * ds_al;
    grad(3) += dl_ds * ds_be;
  }
  return loglik;
}

GarchFit fit_garch(const ReturnSeries& returns, std::uint64_t seed) {
  const Eigen::Index n = returns.size();
  if (n < kMinGarchSample) {
    fail(Errc::kInsufficientData,
         "GARCH MLE needs at least " + std::to_string(kMinGarchSample) +
             " returns, got " + std::to_string(n));
  }

  const double mean = returns.values().mean();
  const double variance =
      (returns.values().array() - mean).square().sum() / static_cast<double>(n - 1);
  if (variance <= 1e-24 * (1.0 + mean * mean)) {
    fail(Errc::kOptimizationFailure,
         "returns are (numerically) constant; GARCH likelihood is degenerate");
  }
  const double v0 = std::max(variance, kVarianceFloor);

  const auto objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    const GarchParams p = unpack(x);
    if (!p.valid()) {
      grad.setZero();
      return std::numeric_limits<double>::infinity();
    }
    Eigen::Vector4d g;
    const double loglik = garch_loglik_grad(p, returns, v0, g);
    if (!std::isfinite(loglik)) {
      grad.setZero();
      return std::numeric_limits<double>::infinity();
    }
    // chain rule into the unconstrained space
    const double gb = logistic(x(2));
    const double gc = logistic(x(3));
    const double s = kStationarityMargin * gc;
    grad(0) = -g(0);
    grad(1) = -g(1) * p.omega;
    grad(2) = -(g(2) - g(3)) * s * gb * (1.0 - gb);
    grad(3) = -(g(2) * gb + g(3) * (1.0 - gb)) * s * (1.0 - gc);
    return -loglik;
  };

  const Eigen::VectorXd x_init = pack(mean, 0.1 * variance, 0.1, 0.8);

  const BfgsOptions options;
  std::optional<BfgsResult> best;
  for (int restart = 0; restart <= 3; ++restart) {
    Eigen::VectorXd x0 = x_init;
    if (restart > 0) {
      std::uint64_t state = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(restart);
      x0(0) += 0.1 * std::sqrt(variance) * uniform_pm1(state);
      for (int k = 1; k < 4; ++k) x0(k) += uniform_pm1(state);
    }
    const BfgsResult run = minimize_bfgs(objective, x0, options);
    if (run.failed || !std::isfinite(run.value)) continue;
    if (!best || run.value < best->value) best = run;
    // Exhausting the iteration budget is a valid stop; only an early
    // line-search breakdown triggers a perturbed restart.
    if (run.converged || run.iterations >= options.max_iterations - 1) break;
  }
  if (!best) {
    fail(Errc::kOptimizationFailure,
         "GARCH likelihood non-finite at every starting point");
  }

  GarchFit fit;
  fit.params = unpack(best->x);
  fit.cond_variance = conditional_variance_path(fit.params, returns, v0);
  fit.loglik = garch_loglik(fit.params, returns, v0);
  const double eps_last = returns[n - 1] - fit.params.mu;
  fit.sigma2_forecast = fit.params.omega + fit.params.alpha * eps_last * eps_last +
                        fit.params.beta * fit.cond_variance(n - 1);
  return fit;
}

double price_volatility(double sigma2, double window_mean) {
  if (!(sigma2 >= 0.0)) {
    fail(Errc::kInvalidParams, "variance must be non-negative");
  }
  if (!(window_mean > 0.0)) {
    fail(Errc::kNonPositiveMean, "window mean must be > 0");
  }
  return window_mean * std::sqrt(sigma2) / 100.0;
}

}  // namespace garchfis
