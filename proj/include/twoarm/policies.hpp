#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twoarm/core_types.hpp"
#include "twoarm/random.hpp"
#include "twoarm/special_functions.hpp"

namespace twoarm {

enum class Phase : std::uint8_t { exploring, committed };

/// Sufficient statistics of a running episode. `t` counts actions taken so far.
struct PolicyState {
  std::int64_t t = 0;
  std::array<std::int64_t, 2> pulls{0, 0};
  std::array<double, 2> sums{0.0, 0.0};
  Phase phase = Phase::exploring;
  std::optional<Arm> committed_arm;
  std::optional<std::int64_t> tau;

  std::int64_t count(Arm a) const { return pulls[index_of(a)]; }

  double empirical_mean(Arm a) const {
    const auto n = pulls[index_of(a)];
    if (n == 0) throw contract_error("empirical mean of an unpulled arm");
    return sums[index_of(a)] / static_cast<double>(n);
  }

  // Unchecked; callers guarantee at least one pull.
  double mean_of(std::size_t i) const { return sums[i] / static_cast<double>(pulls[i]); }

  /// Arm with the larger empirical mean, arm 1 on ties.
  Arm empirical_best() const { return mean_of(1) > mean_of(0) ? Arm::two : Arm::one; }

  void observe(Arm a, double reward) {
    ++t;
    ++pulls[index_of(a)];
    sums[index_of(a)] += reward;
  }

  void commit(Arm a, std::int64_t stopping_time) {
    if (phase == Phase::committed) throw contract_error("policy already committed");
    if (stopping_time % 2 != 0) throw contract_error("ETC stopping time must be even");
    phase = Phase::committed;
    committed_arm = a;
    tau = stopping_time;
  }

  bool is_committed() const { return phase == Phase::committed; }
};

namespace detail {

inline void require_running(const PolicyState& state, std::int64_t horizon) {
  if (state.t >= horizon) throw contract_error("step requested at or beyond the horizon");
}

// Forced alternation 1, 2, 1, 2, ... with 0-based t.
constexpr Arm alternating(std::int64_t t) { return t % 2 == 0 ? Arm::one : Arm::two; }

}  // namespace detail

/// FB-ETC exploration length per arm: min(ceil(2 W(T^2 Δ^4 / 32π) / Δ^2), floor(T/2)), at least 1.
inline std::int64_t fb_etc_budget(std::int64_t horizon, double gap) {
  if (horizon < 2) throw std::domain_error("fb_etc_budget: horizon must be at least 2");
  if (!(gap > 0.0) || !std::isfinite(gap)) throw std::domain_error("fb_etc_budget: gap must be positive");
  const double T = static_cast<double>(horizon);
  const double g2 = gap * gap;
  const double y = T * T * g2 * g2 / (32.0 * std::numbers::pi);
  const double n = std::ceil(2.0 * lambert_w(y) / g2);
  const std::int64_t cap = horizon / 2;
  if (!(n < static_cast<double>(cap))) return cap;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

/// Slack ε_T = Δ log^{-1/8}(e + TΔ²) / 4 used by Δ-UCB.
inline double delta_ucb_epsilon(double horizon, double gap) {
  if (!(gap > 0.0)) throw std::domain_error("delta_ucb_epsilon: gap must be positive");
  const double x = std::numbers::e + horizon * gap * gap;
  return gap * std::pow(std::log(x), -0.125) / 4.0;
}

/// Exploration bonus sqrt(2 log(T/n) / n), optionally tabulated for n = 1..T.
class ConfidenceBonus {
 public:
  explicit ConfidenceBonus(std::int64_t horizon, bool tabulate = false) : horizon_(horizon) {
    if (tabulate) {
      table_.resize(static_cast<std::size_t>(horizon) + 1);
      table_[0] = std::numeric_limits<double>::infinity();
      for (std::int64_t n = 1; n <= horizon; ++n) table_[static_cast<std::size_t>(n)] = formula(horizon, n);
    }
  }

  static double formula(std::int64_t horizon, std::int64_t n) {
    const double nd = static_cast<double>(n);
    return std::sqrt(2.0 * std::log(static_cast<double>(horizon) / nd) / nd);
  }

  double operator()(std::int64_t n) const {
    if (n <= horizon_ && !table_.empty()) return table_[static_cast<std::size_t>(n)];
    return formula(horizon_, n);
  }

  std::int64_t horizon() const { return horizon_; }

 private:
  std::int64_t horizon_;
  std::vector<double> table_;
};

/// Algorithm 1: n pulls of each arm alternately, then the empirical best forever.
inline Arm fb_etc_step(PolicyState& state, std::int64_t budget, std::int64_t horizon) {
  detail::require_running(state, horizon);
  if (state.is_committed()) return *state.committed_arm;
  if (state.t == 2 * budget) {
    state.commit(state.empirical_best(), state.t);
    return *state.committed_arm;
  }
  return detail::alternating(state.t);
}

/// Algorithm 2: alternate until n Δ |μ̂1 - μ̂2| >= log(TΔ²) at some even t = 2n.
inline Arm sprt_etc_step(PolicyState& state, std::int64_t horizon, double gap) {
  if (!(gap > 0.0)) throw std::domain_error("sprt_etc_step: gap must be positive");
  detail::require_running(state, horizon);
  if (state.is_committed()) return *state.committed_arm;
  if (state.t >= 2 && state.t % 2 == 0) {
    const double n = static_cast<double>(state.t / 2);
    const double statistic = n * gap * std::abs(state.mean_of(0) - state.mean_of(1));
    const double threshold = std::log(static_cast<double>(horizon) * gap * gap);
    if (statistic >= threshold) {
      state.commit(state.empirical_best(), state.t);
      return *state.committed_arm;
    }
  }
  return detail::alternating(state.t);
}

/// Stopping threshold of BAI-ETC at even t: sqrt(8 log(T/t) / t), zero once t >= T.
inline double bai_etc_threshold(std::int64_t horizon, std::int64_t t) {
  if (t >= horizon) return 0.0;
  const double td = static_cast<double>(t);
  return std::sqrt(8.0 * std::log(static_cast<double>(horizon) / td) / td);
}

/// Algorithm 3: alternate until |μ̂1 - μ̂2| >= sqrt(8 log(T/t) / t) at some even t.
inline Arm bai_etc_step(PolicyState& state, std::int64_t horizon) {
  detail::require_running(state, horizon);
  if (state.is_committed()) return *state.committed_arm;
  if (state.t >= 2 && state.t % 2 == 0) {
    if (std::abs(state.mean_of(0) - state.mean_of(1)) >= bai_etc_threshold(horizon, state.t)) {
      state.commit(state.empirical_best(), state.t);
      return *state.committed_arm;
    }
  }
  return detail::alternating(state.t);
}

/// Algorithm 4. Plays the less-pulled arm (arm 1 on ties) if its upper
/// confidence bound reaches μ̂ of the other arm plus Δ - 2ε_T, else the
/// more-pulled arm. An unpulled arm is always played.
inline Arm delta_ucb_step(const PolicyState& state, double gap, double epsilon,
                          const ConfidenceBonus& bonus) {
  if (!(gap > 0.0)) throw std::domain_error("delta_ucb_step: gap must be positive");
  detail::require_running(state, bonus.horizon());
  const Arm least = state.pulls[1] < state.pulls[0] ? Arm::two : Arm::one;
  const Arm most = other(least);
  const auto n = state.pulls[index_of(least)];
  if (n == 0) return least;
  const double ucb = state.mean_of(index_of(least)) + bonus(n);
  const double target = state.mean_of(index_of(most)) + gap - 2.0 * epsilon;
  return ucb >= target ? least : most;
}

inline Arm delta_ucb_step(const PolicyState& state, std::int64_t horizon, double gap) {
  return delta_ucb_step(state, gap, delta_ucb_epsilon(static_cast<double>(horizon), gap), ConfidenceBonus(horizon));
}

/// Algorithm 5: argmax of μ̂_i + sqrt(2 log(T/N_i) / N_i); unpulled arms first, arm 1 on ties.
inline Arm ucb_star_step(const PolicyState& state, const ConfidenceBonus& bonus) {
  detail::require_running(state, bonus.horizon());
  if (state.pulls[0] == 0) return Arm::one;
  if (state.pulls[1] == 0) return Arm::two;
  const double index1 = state.mean_of(0) + bonus(state.pulls[0]);
  const double index2 = state.mean_of(1) + bonus(state.pulls[1]);
  return index2 > index1 ? Arm::two : Arm::one;
}

inline Arm ucb_star_step(const PolicyState& state, std::int64_t horizon) {
  return ucb_star_step(state, ConfidenceBonus(horizon));
}

/// A PolicySpec with its per-horizon constants computed once, so that many
/// episodes can share them.
class PreparedPolicy {
 public:
  explicit PreparedPolicy(PolicySpec spec)
      : spec_(std::move(spec)),
        bonus_(spec_.horizon(), spec_.kind() == PolicyKind::delta_ucb || spec_.kind() == PolicyKind::ucb_star) {
    const auto T = spec_.horizon();
    if (spec_.kind() == PolicyKind::fb_etc) {
      budget_ = spec_.budget() ? *spec_.budget() : fb_etc_budget(T, *spec_.known_gap());
    }
    if (spec_.kind() == PolicyKind::delta_ucb) epsilon_ = delta_ucb_epsilon(static_cast<double>(T), *spec_.known_gap());
  }

  const PolicySpec& spec() const { return spec_; }
  std::int64_t horizon() const { return spec_.horizon(); }
  std::int64_t budget() const { return budget_; }
  double epsilon() const { return epsilon_; }

  Arm next_action(PolicyState& state) const {
    switch (spec_.kind()) {
      case PolicyKind::fb_etc: return fb_etc_step(state, budget_, horizon());
      case PolicyKind::sprt_etc: return sprt_etc_step(state, horizon(), *spec_.known_gap());
      case PolicyKind::bai_etc: return bai_etc_step(state, horizon());
      case PolicyKind::delta_ucb: return delta_ucb_step(state, *spec_.known_gap(), epsilon_, bonus_);
      case PolicyKind::ucb_star: return ucb_star_step(state, bonus_);
    }
    throw contract_error("unknown policy kind");
  }

 private:
  PolicySpec spec_;
  ConfidenceBonus bonus_;
  std::int64_t budget_ = 0;
  double epsilon_ = 0.0;
};

struct EpisodeOptions {
  // Full action sequences are stored only up to this horizon; longer
  // episodes keep counters only.
  std::int64_t record_actions_up_to = 1 << 16;
};

/// Runs one episode, drawing rewards from `draw(arm)`.
///
/// Rewards are requested only while they can influence a decision: once an
/// ETC strategy commits, the remaining T - τ pulls are booked without draws.
/// If exploration is still running at the horizon, τ is set to T rounded up
/// to even and the empirical best arm is recorded as the commitment.
template <class RewardSource>
Trajectory run_episode_with(const PreparedPolicy& policy, const BanditInstance& instance,
                            RewardSource&& draw, const EpisodeOptions& options = {}) {
  const std::int64_t T = policy.horizon();
  const bool record = T <= options.record_actions_up_to;
  const bool etc = is_etc(policy.spec().kind());

  Trajectory out;
  out.horizon = T;
  if (record) out.actions.reserve(static_cast<std::size_t>(T));

  PolicyState state;
  while (state.t < T) {
    const Arm a = policy.next_action(state);
    if (etc && state.is_committed()) {
      const std::int64_t remaining = T - state.t;
      state.pulls[index_of(a)] += remaining;
      state.t = T;
      if (record) out.actions.insert(out.actions.end(), static_cast<std::size_t>(remaining), a);
      break;
    }
    state.observe(a, draw(a));
    if (record) out.actions.push_back(a);
  }
  if (etc && !state.is_committed()) state.commit(state.empirical_best(), T % 2 == 0 ? T : T + 1);

  out.counts = state.pulls;
  if (etc) {
    out.tau = state.tau;
    out.committed_arm = state.committed_arm;
  }
  out.pseudo_regret = pseudo_regret_of(out, instance);
  return out;
}

inline Trajectory run_episode(const PreparedPolicy& policy, const BanditInstance& instance,
                              GaussianStream& stream, const EpisodeOptions& options = {}) {
  return run_episode_with(policy, instance, [&](Arm a) { return stream.normal(instance.mean(a)); },
                          options);
}

inline Trajectory run_episode(const PolicySpec& spec, const BanditInstance& instance,
                              GaussianStream& stream, const EpisodeOptions& options = {}) {
  return run_episode(PreparedPolicy(spec), instance, stream, options);
}

}  // namespace twoarm
