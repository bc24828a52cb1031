#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twoarm {

/// Raised when a caller breaks an API precondition (inconsistent objects,
/// mismatched horizons, missing parameters).
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Arm : std::uint8_t { one = 1, two = 2 };

constexpr std::size_t index_of(Arm a) { return a == Arm::one ? 0 : 1; }
constexpr Arm other(Arm a) { return a == Arm::one ? Arm::two : Arm::one; }
constexpr int number_of(Arm a) { return static_cast<int>(a); }

/// Two Gaussian arms with unit variance.
class BanditInstance {
 public:
  BanditInstance(double mu1, double mu2) : means_{mu1, mu2} {
    if (!std::isfinite(mu1) || !std::isfinite(mu2)) {
      throw contract_error("bandit means must be finite");
    }
  }

  /// Instance with arm 1 optimal: (gap, 0).
  static BanditInstance with_gap(double gap) { return BanditInstance(gap, 0.0); }

  double mu1() const { return means_[0]; }
  double mu2() const { return means_[1]; }
  double mean(Arm a) const { return means_[index_of(a)]; }
  double gap() const { return std::abs(means_[0] - means_[1]); }
  // Ties go to arm 1.
  Arm best_arm() const { return means_[1] > means_[0] ? Arm::two : Arm::one; }
  Arm worst_arm() const { return other(best_arm()); }

  /// The same problem with the arm labels exchanged.
  BanditInstance swapped() const { return BanditInstance(means_[1], means_[0]); }

 private:
  std::array<double, 2> means_;
};

enum class PolicyKind : std::uint8_t { fb_etc = 0, sprt_etc = 1, bai_etc = 2, delta_ucb = 3, ucb_star = 4 };

inline constexpr std::array<PolicyKind, 5> kAllPolicies = {
    PolicyKind::fb_etc, PolicyKind::sprt_etc, PolicyKind::bai_etc, PolicyKind::delta_ucb,
    PolicyKind::ucb_star};

constexpr bool needs_known_gap(PolicyKind k) {
  return k == PolicyKind::fb_etc || k == PolicyKind::sprt_etc || k == PolicyKind::delta_ucb;
}

constexpr bool is_etc(PolicyKind k) {
  return k == PolicyKind::fb_etc || k == PolicyKind::sprt_etc || k == PolicyKind::bai_etc;
}

inline std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::fb_etc: return "fb_etc";
    case PolicyKind::sprt_etc: return "sprt_etc";
    case PolicyKind::bai_etc: return "bai_etc";
    case PolicyKind::delta_ucb: return "delta_ucb";
    case PolicyKind::ucb_star: return "ucb_star";
  }
  return "unknown";
}

inline std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (PolicyKind k : kAllPolicies) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

/// Strategy plus its horizon and, for gap-aware strategies, the known gap.
/// `budget` optionally overrides the FB-ETC exploration length n (pulls per arm).
class PolicySpec {
 public:
  PolicySpec(PolicyKind kind, std::int64_t horizon, std::optional<double> known_gap = std::nullopt,
             std::optional<std::int64_t> budget = std::nullopt)
      : kind_(kind), horizon_(horizon), known_gap_(known_gap), budget_(budget) {
    if (horizon_ < 2) throw contract_error("horizon must be at least 2");
    if (needs_known_gap(kind_)) {
      if (!known_gap_) throw contract_error(std::string(to_string(kind_)) + " requires a known gap");
      if (!(*known_gap_ > 0.0) || !std::isfinite(*known_gap_)) {
        throw std::domain_error("known gap must be positive and finite");
      }
    } else if (known_gap_) {
      throw contract_error(std::string(to_string(kind_)) + " must not be given a known gap");
    }
    if (budget_) {
      if (kind_ != PolicyKind::fb_etc) throw contract_error("budget applies to fb_etc only");
      if (*budget_ < 1 || 2 * *budget_ > horizon_) {
        throw std::domain_error("fb_etc budget must satisfy 1 <= n <= T/2");
      }
    }
  }

  PolicyKind kind() const { return kind_; }
  std::int64_t horizon() const { return horizon_; }
  const std::optional<double>& known_gap() const { return known_gap_; }
  const std::optional<std::int64_t>& budget() const { return budget_; }

  PolicySpec with_horizon(std::int64_t horizon) const {
    return PolicySpec(kind_, horizon, known_gap_, budget_);
  }

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;

 private:
  PolicyKind kind_;
  std::int64_t horizon_;
  std::optional<double> known_gap_;
  std::optional<std::int64_t> budget_;
};

/// Spec for `kind` against `instance`: gap-aware strategies are told the true gap.
inline PolicySpec spec_for(PolicyKind kind, std::int64_t horizon, const BanditInstance& instance) {
  if (needs_known_gap(kind)) return PolicySpec(kind, horizon, instance.gap());
  return PolicySpec(kind, horizon);
}

/// One episode. `actions` is empty when the run was recorded as counters only.
struct Trajectory {
  std::int64_t horizon = 0;
  std::vector<Arm> actions;
  std::array<std::int64_t, 2> counts{0, 0};
  std::optional<std::int64_t> tau;
  std::optional<Arm> committed_arm;
  double pseudo_regret = 0.0;

  std::int64_t count(Arm a) const { return counts[index_of(a)]; }
};

/// Δ times the number of pulls of the suboptimal arm.
inline double pseudo_regret_of(const Trajectory& trajectory, const BanditInstance& instance) {
  if (trajectory.counts[0] < 0 || trajectory.counts[1] < 0 ||
      trajectory.counts[0] + trajectory.counts[1] != trajectory.horizon) {
    throw contract_error("trajectory counts do not add up to its horizon");
  }
  if (!trajectory.actions.empty() &&
      static_cast<std::int64_t>(trajectory.actions.size()) != trajectory.horizon) {
    throw contract_error("trajectory action sequence does not match its horizon");
  }
  const double gap = instance.gap();
  if (gap == 0.0) return 0.0;
  return gap * static_cast<double>(trajectory.count(instance.worst_arm()));
}

struct RegretEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  PolicySpec policy;
  std::optional<double> mean_tau;
  std::optional<double> misid_rate;
};

/// A finite-time regret bound. `value` is the closed-form bound: the displayed
/// formula when `regime_ok`, otherwise `fallback_value`.
struct BoundReport {
  double value = 0.0;
  bool regime_ok = false;
  double fallback_value = 0.0;
  double minimax_value = 0.0;
};

}  // namespace twoarm
