#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "garchfis/series.hpp"

namespace garchfis {

inline constexpr int kNumFuzzySets = 5;

/// Triangular membership functions for one window position: five centers
/// spaced `half_width` apart, symmetric around the middle center. The equal
/// spacing makes adjacent memberships sum to 1 between neighboring centers.
struct MembershipParams {
  Eigen::Matrix<double, kNumFuzzySets, 1> centers;
  double half_width = 1.0;
};

/// Centers at mean + (j-3) * sigma_hat for j = 1..5 with half-width
/// sigma_hat. A non-positive sigma_hat falls back to width 1.0.
MembershipParams build_membership_params(double mean, double sigma_hat);

/// (half_width - |y - center|) / half_width inside the support, 0 outside.
double triangular_membership(double y, double center, double half_width);

/// Index (1..5) of the maximal membership degree; ties go to the lowest
/// index. Outside every support the nearest center wins.
int fuzzify_label(double x, const MembershipParams& params);

inline double membership_of_label(double x, const MembershipParams& params,
                                  int label) {
  return triangular_membership(x, params.centers(label - 1), params.half_width);
}

/// Per-timestep membership parameters covering W consecutive time indices.
/// Entry j (chronological) fuzzifies the j-th element of a window.
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(std::int64_t start_index, std::vector<MembershipParams> entries);

  [[nodiscard]] std::int64_t start_index() const noexcept { return start_index_; }
  [[nodiscard]] int length() const noexcept {
    return static_cast<int>(entries_.size());
  }
  [[nodiscard]] const MembershipParams& at_offset(int j) const {
    return entries_.at(static_cast<std::size_t>(j));
  }
  [[nodiscard]] const MembershipParams& at_index(std::int64_t t) const;
  [[nodiscard]] const std::vector<MembershipParams>& entries() const noexcept {
    return entries_;
  }

  /// Drop the oldest entry and append `next` for the following time index.
  void roll(const MembershipParams& next);

 private:
  std::int64_t start_index_ = 0;
  std::vector<MembershipParams> entries_;
};

struct FuzzyRule {
  std::vector<int> antecedent;  // W labels in 1..5
  double consequent = 0.0;
  double weight_sum = 0.0;      // accumulated activation mass behind the consequent
};

/// Rules keyed by antecedent label vector, held in lexicographic order so
/// that inference and serialization are reproducible bit for bit.
class RuleBase {
 public:
  RuleBase() = default;
  RuleBase(int window_length, std::vector<FuzzyRule> rules);

  [[nodiscard]] int window_length() const noexcept { return window_length_; }
  [[nodiscard]] std::size_t size() const noexcept { return rules_.size(); }
  [[nodiscard]] bool empty() const noexcept { return rules_.empty(); }
  [[nodiscard]] const std::vector<FuzzyRule>& rules() const noexcept {
    return rules_;
  }
  [[nodiscard]] const FuzzyRule* find(const std::vector<int>& antecedent) const;

 private:
  int window_length_ = 0;
  std::vector<FuzzyRule> rules_;
};

/// One training sample before merging: arg-max labels over the window, the
/// realized target, and the sample's own activation (membership product).
struct RuleCandidate {
  std::vector<int> antecedent;
  double target = 0.0;
  double activation = 0.0;
};

/// Merges duplicate antecedents into rules whose consequent is the
/// activation-weighted average of the group's targets. A group whose
/// activations are all zero keeps the plain average.
RuleBase merge_candidates(const std::vector<RuleCandidate>& candidates,
                          int window_length);

struct WmTraining {
  RuleBase rules;
  ParamSet theta_last;  // parameters of the final training window
};

/// Wang-Mendel training: one candidate rule per window (arg-max labels over
/// the per-index parameters, target = price `horizon` steps ahead),
/// duplicates merged by activation-weighted averaging of targets.
/// Historical indices of the very first window get the first window's
/// centers with half-width 1.0.
WmTraining wm_train(Eigen::Ref<const Eigen::VectorXd> prices, int window_length,
                    int horizon);
WmTraining wm_train(const PriceSeries& prices, int window_length, int horizon);

/// Zero-order TSK inference: activation-weighted average of rule
/// consequents, where each rule's activation is the product over window
/// positions of the membership of the window value in the rule's labeled
/// set. When no rule fires the newest window element is returned and
/// `fallback_fired` (if given) is set.
double fis_infer(Eigen::Ref<const Eigen::VectorXd> window, const ParamSet& theta,
                 const RuleBase& rules, bool* fallback_fired = nullptr);

}  // namespace garchfis
