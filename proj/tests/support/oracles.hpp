#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

// Independent reference implementations used to cross-check the library.
// Everything here is written with plain loops and containers, sharing no
// code with the implementation under test.
namespace oracle {

inline double mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double sample_stddev(const std::vector<double>& xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Gaussian log-likelihood under the GARCH(1,1) variance recursion, summed
// term by term; the first observation uses the seed variance.
inline double garch_loglik(double mu, double omega, double alpha, double beta,
                           const std::vector<double>& returns,
                           double initial_variance) {
  const double ln2pi = std::log(2.0 * 3.141592653589793);
  std::vector<double> sigma2(returns.size());
  sigma2[0] = initial_variance;
  for (std::size_t i = 1; i < returns.size(); ++i) {
    const double eps = returns[i - 1] - mu;
    sigma2[i] = omega + alpha * eps * eps + beta * sigma2[i - 1];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    const double eps = returns[i] - mu;
    total += -0.5 * (ln2pi + std::log(sigma2[i]) + eps * eps / sigma2[i]);
  }
  return total;
}

inline double mae(const std::vector<double>& pred, const std::vector<double>& act) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += std::fabs(pred[i] - act[i]);
  return sum / static_cast<double>(pred.size());
}

inline double mape(const std::vector<double>& pred, const std::vector<double>& act) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sum += std::fabs((pred[i] - act[i]) / act[i]);
  }
  return 100.0 * sum / static_cast<double>(pred.size());
}

inline double r2(const std::vector<double>& pred, const std::vector<double>& act) {
  const double m = mean(act);
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sse += (pred[i] - act[i]) * (pred[i] - act[i]);
    sst += (act[i] - m) * (act[i] - m);
  }
  return 1.0 - sse / sst;
}

// ---- Wang-Mendel reference -------------------------------------------------

struct WmParams {
  double centers[5];
  double width;
};

inline double triangle(double y, double center, double width) {
  const double d = std::fabs(y - center);
  return d > width ? 0.0 : (width - d) / width;
}

inline int argmax_label(double x, const WmParams& p) {
  int best = 1;
  double best_degree = triangle(x, p.centers[0], p.width);
  for (int j = 2; j <= 5; ++j) {
    const double degree = triangle(x, p.centers[j - 1], p.width);
    if (degree > best_degree) {
      best = j;
      best_degree = degree;
    }
  }
  if (best_degree > 0.0) return best;
  int nearest = 1;
  double nearest_distance = std::fabs(x - p.centers[0]);
  for (int j = 2; j <= 5; ++j) {
    const double distance = std::fabs(x - p.centers[j - 1]);
    if (distance < nearest_distance) {
      nearest = j;
      nearest_distance = distance;
    }
  }
  return nearest;
}

// Full Wang-Mendel pass: per-window parameters, arg-max antecedents,
// activation-weighted merge of duplicate antecedents. A group whose
// activations are all zero degrades to the plain target average.
inline std::map<std::vector<int>, double> wm_consequents(
    const std::vector<double>& prices, int window, int horizon) {
  const auto total = static_cast<std::ptrdiff_t>(prices.size());
  std::map<std::ptrdiff_t, WmParams> theta;

  struct Candidate {
    std::vector<int> antecedent;
    double target;
    double activation;
  };
  std::vector<Candidate> candidates;

  for (std::ptrdiff_t end = window - 1; end <= total - 1 - horizon; ++end) {
    std::vector<double> win(prices.begin() + (end - window + 1),
                            prices.begin() + (end + 1));
    const double m = mean(win);
    double sd = sample_stddev(win);
    if (sd == 0.0) sd = 1.0;
    WmParams current;
    for (int j = 1; j <= 5; ++j) current.centers[j - 1] = m + (j - 3) * sd;
    current.width = sd;
    if (theta.find(end) == theta.end()) theta[end] = current;
    for (std::ptrdiff_t s = end - window + 1; s < end; ++s) {
      if (theta.find(s) == theta.end()) {
        WmParams hist = current;
        hist.width = 1.0;
        theta[s] = hist;
      }
    }
    Candidate candidate;
    candidate.activation = 1.0;
    for (std::ptrdiff_t s = end - window + 1; s <= end; ++s) {
      const WmParams& p = theta[s];
      const int label = argmax_label(prices[static_cast<std::size_t>(s)], p);
      candidate.antecedent.push_back(label);
      candidate.activation *=
          triangle(prices[static_cast<std::size_t>(s)], p.centers[label - 1], p.width);
    }
    candidate.target = prices[static_cast<std::size_t>(end + horizon)];
    candidates.push_back(std::move(candidate));
  }

  struct Group {
    double weighted = 0.0;
    double weights = 0.0;
    double plain = 0.0;
    int count = 0;
  };
  std::map<std::vector<int>, Group> groups;
  for (const Candidate& c : candidates) {
    Group& g = groups[c.antecedent];
    g.weighted += c.activation * c.target;
    g.weights += c.activation;
    g.plain += c.target;
    g.count += 1;
  }
  std::map<std::vector<int>, double> consequents;
  for (const auto& [key, g] : groups) {
    consequents[key] =
        g.weights > 0.0 ? g.weighted / g.weights : g.plain / g.count;
  }
  return consequents;
}

}  // namespace oracle
