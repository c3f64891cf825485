#include "garchfis/fis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace garchfis {

MembershipParams build_membership_params(double mean, double sigma_hat) {
  const double width = sigma_hat > 0.0 ? sigma_hat : 1.0;
  MembershipParams params;
  for (int j = 1; j <= kNumFuzzySets; ++j) {
    params.centers(j - 1) = mean + static_cast<double>(j - 3) * width;
  }
  params.half_width = width;
  return params;
}

double triangular_membership(double y, double center, double half_width) {
  if (!(half_width > 0.0)) {
    fail(Errc::kNonPositiveWidth, "membership half-width must be > 0");
  }
  const double distance = std::abs(y - center);
  if (distance > half_width) return 0.0;
  return (half_width - distance) / half_width;
}

int fuzzify_label(double x, const MembershipParams& params) {
  int best = 1;
  double best_degree = triangular_membership(x, params.centers(0), params.half_width);
  for (int j = 2; j <= kNumFuzzySets; ++j) {
    const double degree =
        triangular_membership(x, params.centers(j - 1), params.half_width);
    if (degree > best_degree) {
      best = j;
      best_degree = degree;
    }
  }
  if (best_degree > 0.0) return best;
  // outside every support: nearest center
  int nearest = 1;
  double nearest_distance = std::abs(x - params.centers(0));
  for (int j = 2; j <= kNumFuzzySets; ++j) {
    const double distance = std::abs(x - params.centers(j - 1));
    if (distance < nearest_distance) {
      nearest = j;
      nearest_distance = distance;
    }
  }
  return nearest;
}

ParamSet::ParamSet(std::int64_t start_index, std::vector<MembershipParams> entries)
    : start_index_(start_index), entries_(std::move(entries)) {
  if (entries_.empty()) fail(Errc::kEmptyInput, "parameter set has no entries");
}

const MembershipParams& ParamSet::at_index(std::int64_t t) const {
  const std::int64_t offset = t - start_index_;
  if (offset < 0 || offset >= length()) {
    fail(Errc::kLengthMismatch,
         "time index " + std::to_string(t) + " outside parameter set");
  }
  return entries_[static_cast<std::size_t>(offset)];
}

void ParamSet::roll(const MembershipParams& next) {
  if (entries_.empty()) fail(Errc::kEmptyInput, "cannot roll an empty parameter set");
  entries_.erase(entries_.begin());
  entries_.push_back(next);
  ++start_index_;
}

RuleBase::RuleBase(int window_length, std::vector<FuzzyRule> rules)
    : window_length_(window_length), rules_(std::move(rules)) {
  for (const FuzzyRule& rule : rules_) {
    if (static_cast<int>(rule.antecedent.size()) != window_length_) {
      fail(Errc::kLengthMismatch, "rule antecedent length != window length");
    }
    for (int label : rule.antecedent) {
      if (label < 1 || label > kNumFuzzySets) {
        fail(Errc::kParseError, "rule label outside 1..5");
      }
    }
  }
  std::sort(rules_.begin(), rules_.end(),
            [](const FuzzyRule& a, const FuzzyRule& b) {
              return a.antecedent < b.antecedent;
            });
  for (std::size_t i = 1; i < rules_.size(); ++i) {
    if (rules_[i].antecedent == rules_[i - 1].antecedent) {
      fail(Errc::kParseError, "duplicate rule antecedent");
    }
  }
}

const FuzzyRule* RuleBase::find(const std::vector<int>& antecedent) const {
  const auto it = std::lower_bound(
      rules_.begin(), rules_.end(), antecedent,
      [](const FuzzyRule& rule, const std::vector<int>& key) {
        return rule.antecedent < key;
      });
  if (it == rules_.end() || it->antecedent != antecedent) return nullptr;
  return &*it;
}

RuleBase merge_candidates(const std::vector<RuleCandidate>& candidates,
                          int window_length) {
  struct Accumulator {
    double weighted_targets = 0.0;
    double weights = 0.0;
    double targets = 0.0;
    std::int64_t count = 0;
  };
  // ordered by antecedent, which fixes the final rule order
  std::map<std::vector<int>, Accumulator> groups;
  for (const RuleCandidate& candidate : candidates) {
    Accumulator& acc = groups[candidate.antecedent];
    acc.weighted_targets += candidate.activation * candidate.target;
    acc.weights += candidate.activation;
    acc.targets += candidate.target;
    acc.count += 1;
  }

  std::vector<FuzzyRule> rules;
  rules.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    FuzzyRule rule;
    rule.antecedent = key;
    rule.weight_sum = acc.weights;
    rule.consequent = acc.weights > 0.0
                          ? acc.weighted_targets / acc.weights
                          : acc.targets / static_cast<double>(acc.count);
    rules.push_back(std::move(rule));
  }
  return RuleBase(window_length, std::move(rules));
}

WmTraining wm_train(Eigen::Ref<const Eigen::VectorXd> prices, int window_length,
                    int horizon) {
  const std::int64_t total = prices.size();
  const std::int64_t w = window_length;
  if (w < 3) fail(Errc::kWindowTooShort, "window length must be >= 3");
  if (horizon < 1) fail(Errc::kSeriesTooShort, "training horizon must be >= 1");
  if (total < w + horizon) {
    fail(Errc::kSeriesTooShort,
         "need at least window_length + horizon prices, got " +
             std::to_string(total));
  }
  if (!prices.allFinite()) {
    fail(Errc::kNonFiniteValue, "training series has non-finite values");
  }

  std::vector<MembershipParams> theta(static_cast<std::size_t>(total));
  std::vector<bool> theta_set(static_cast<std::size_t>(total), false);
  std::vector<RuleCandidate> candidates;
  candidates.reserve(static_cast<std::size_t>(total - w - horizon + 1));

  for (std::int64_t end = w - 1; end <= total - 1 - horizon; ++end) {
    const auto window = prices.segment(end - w + 1, w);
    const WindowStats stats = window_stats(window);
    const double width = stats.stddev > 0.0 ? stats.stddev : 1.0;
    const MembershipParams current = build_membership_params(stats.mean, width);

    if (!theta_set[static_cast<std::size_t>(end)]) {
      theta[static_cast<std::size_t>(end)] = current;
      theta_set[static_cast<std::size_t>(end)] = true;
    }
    // only the first window leaves earlier indices unset
    for (std::int64_t s = end - w + 1; s < end; ++s) {
      if (!theta_set[static_cast<std::size_t>(s)]) {
        theta[static_cast<std::size_t>(s)] = {current.centers, 1.0};
        theta_set[static_cast<std::size_t>(s)] = true;
      }
    }

    RuleCandidate candidate;
    candidate.antecedent.resize(static_cast<std::size_t>(w));
    candidate.activation = 1.0;
    for (std::int64_t s = end - w + 1; s <= end; ++s) {
      const MembershipParams& p = theta[static_cast<std::size_t>(s)];
      const int label = fuzzify_label(prices(s), p);
      candidate.antecedent[static_cast<std::size_t>(s - (end - w + 1))] = label;
      candidate.activation *= membership_of_label(prices(s), p, label);
    }
    candidate.target = prices(end + horizon);
    candidates.push_back(std::move(candidate));
  }

  const std::int64_t last_end = total - 1 - horizon;
  std::vector<MembershipParams> last_entries(
      theta.begin() + (last_end - w + 1), theta.begin() + (last_end + 1));

  WmTraining out;
  out.rules = merge_candidates(candidates, window_length);
  out.theta_last = ParamSet(last_end - w + 1, std::move(last_entries));
  return out;
}

WmTraining wm_train(const PriceSeries& prices, int window_length, int horizon) {
  return wm_train(prices.values(), window_length, horizon);
}

double fis_infer(Eigen::Ref<const Eigen::VectorXd> window, const ParamSet& theta,
                 const RuleBase& rules, bool* fallback_fired) {
  if (rules.empty()) fail(Errc::kEmptyRuleBase, "rule base is empty");
  const int w = rules.window_length();
  if (window.size() != w || theta.length() != w) {
    fail(Errc::kLengthMismatch,
         "window, parameter set and rule base disagree on window length");
  }

  double numerator = 0.0;
  double denominator = 0.0;
  for (const FuzzyRule& rule : rules.rules()) {
    double activation = 1.0;
    for (int j = 0; j < w; ++j) {
      activation *=
          membership_of_label(window(j), theta.at_offset(j), rule.antecedent[j]);
      if (activation == 0.0) break;
    }
    if (activation > 0.0) {
      numerator += activation * rule.consequent;
      denominator += activation;
    }
  }

  if (denominator > 0.0) {
    if (fallback_fired != nullptr) *fallback_fired = false;
    return numerator / denominator;
  }
  if (fallback_fired != nullptr) *fallback_fired = true;
  return window(w - 1);
}

}  // namespace garchfis
