#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twoarm/core_types.hpp"
#include "twoarm/parallel.hpp"
#include "twoarm/policies.hpp"
#include "twoarm/random.hpp"

namespace twoarm {

/// Seed of one replication's reward stream:
///   h = mix64(master); h = mix64(h ^ policy); h = mix64(h ^ horizon); h = mix64(h ^ replication)
/// with mix64 the splitmix64 finalizer. Each stage is a bijection, so distinct
/// replication indices under one prefix never collide. The engine passes the
/// policy kind ordinal and the horizon value T as the middle keys, which makes
/// a cell's streams independent of where it sits in an experiment grid.
constexpr std::uint64_t sub_seed(std::uint64_t master_seed, std::uint64_t policy_index,
                                 std::uint64_t horizon_index, std::uint64_t replication_index) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ policy_index);
  h = mix64(h ^ horizon_index);
  return mix64(h ^ replication_index);
}

struct SimulationOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  std::int64_t chunk = 64;
};

struct ReplicationOutcome {
  double pseudo_regret = 0.0;
  std::int64_t stopped_at = -1;  // τ ∧ T for ETC strategies, -1 otherwise
  bool misidentified = false;    // τ < T and the committed arm is suboptimal
};

/// Replications [first, first + count) of one cell, in replication order.
inline std::vector<ReplicationOutcome> simulate_replications(const PreparedPolicy& policy,
                                                             const BanditInstance& instance,
                                                             std::uint64_t master_seed, std::int64_t first,
                                                             std::int64_t count, const SimulationOptions& options = {}) {
  if (first < 0 || count < 0) throw contract_error("replication range must be nonnegative");
  std::vector<ReplicationOutcome> out(static_cast<std::size_t>(count));
  const auto kind_key = static_cast<std::uint64_t>(policy.spec().kind());
  const auto horizon_key = static_cast<std::uint64_t>(policy.horizon());
  const EpisodeOptions episode{.record_actions_up_to = 0};
  parallel_chunks(count, options.threads, options.chunk, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      GaussianStream stream(sub_seed(master_seed, kind_key, horizon_key, static_cast<std::uint64_t>(first + i)));
      const Trajectory tr = run_episode(policy, instance, stream, episode);
      ReplicationOutcome& o = out[static_cast<std::size_t>(i)];
      o.pseudo_regret = tr.pseudo_regret;
      if (tr.tau) {
        o.stopped_at = std::min(*tr.tau, tr.horizon);
        o.misidentified = *tr.tau < tr.horizon && tr.committed_arm == instance.worst_arm();
      }
    }
  });
  return out;
}

/// Mean and standard error (sample sd / sqrt(n)) of a sequence, summed in order.
struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;
};

template <class Range, class Project>
SampleSummary summarize_samples(const Range& items, Project project) {
  SampleSummary s;
  const auto n = static_cast<double>(std::size(items));
  if (n == 0) return s;
  double sum = 0.0;
  for (const auto& it : items) sum += project(it);
  s.mean = sum / n;
  if (n >= 2) {
    double ss = 0.0;
    for (const auto& it : items) {
      const double d = project(it) - s.mean;
      ss += d * d;
    }
    s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

inline RegretEstimate summarize(const std::vector<ReplicationOutcome>& outcomes, const PolicySpec& spec,
                                std::uint64_t master_seed) {
  const auto regret = summarize_samples(outcomes, [](const ReplicationOutcome& o) { return o.pseudo_regret; });
  RegretEstimate est{.mean = regret.mean,
                     .std_error = regret.std_error,
                     .reps = static_cast<std::int64_t>(outcomes.size()),
                     .seed = master_seed,
                     .horizon = spec.horizon(),
                     .policy = spec,
                     .mean_tau = std::nullopt,
                     .misid_rate = std::nullopt};
  if (is_etc(spec.kind()) && !outcomes.empty()) {
    est.mean_tau = summarize_samples(outcomes, [](const ReplicationOutcome& o) {
                     return static_cast<double>(o.stopped_at);
                   }).mean;
    est.misid_rate = summarize_samples(outcomes, [](const ReplicationOutcome& o) {
                       return o.misidentified ? 1.0 : 0.0;
                     }).mean;
  }
  return est;
}

/// Monte Carlo pseudo-regret of `spec` on `instance` over `reps` replications.
/// The result depends only on the arguments, never on the thread count.
inline RegretEstimate estimate_regret(const PolicySpec& spec, const BanditInstance& instance, std::int64_t reps,
                                      std::uint64_t master_seed, const SimulationOptions& options = {}) {
  if (reps < 2) throw std::domain_error("estimate_regret: need at least 2 replications");
  const PreparedPolicy policy(spec);
  return summarize(simulate_replications(policy, instance, master_seed, 0, reps, options), spec, master_seed);
}

struct ExperimentPlan {
  std::vector<PolicyKind> policies;
  BanditInstance instance;
  std::vector<std::int64_t> horizons;
  std::int64_t reps = 10000;
  std::uint64_t master_seed = 0;
  std::optional<std::int64_t> fb_budget;

  void validate() const {
    if (policies.empty()) throw contract_error("experiment plan has no policies");
    if (horizons.empty()) throw contract_error("experiment plan has no horizons");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      if (horizons[i] < 2) throw contract_error("horizons must be at least 2");
      if (i > 0 && horizons[i] <= horizons[i - 1]) throw contract_error("horizons must be strictly increasing");
    }
    if (reps < 2) throw contract_error("experiment plan needs at least 2 replications");
  }

  PolicySpec spec(PolicyKind kind, std::int64_t horizon) const {
    if (kind == PolicyKind::fb_etc && fb_budget) {
      return PolicySpec(kind, horizon, instance.gap(), fb_budget);
    }
    return spec_for(kind, horizon, instance);
  }
};

/// One estimate per (policy, horizon), policy-major in plan order.
inline std::vector<RegretEstimate> run_plan(const ExperimentPlan& plan, const SimulationOptions& options = {}) {
  plan.validate();
  std::vector<RegretEstimate> rows;
  rows.reserve(plan.policies.size() * plan.horizons.size());
  for (PolicyKind kind : plan.policies) {
    for (std::int64_t T : plan.horizons) {
      rows.push_back(estimate_regret(plan.spec(kind, T), plan.instance, plan.reps, plan.master_seed, options));
    }
  }
  return rows;
}

struct FitRange {
  double min_horizon = 0.0;
  double max_horizon = std::numeric_limits<double>::infinity();
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  FitRange fit_range;
  std::size_t points = 0;
};

struct RegretPoint {
  double horizon = 0.0;
  double mean_regret = 0.0;
};

/// Least-squares line of Δ·R against log T over the points inside `range`.
/// The returned fit_range is the span of horizons actually used.
inline SlopeFit estimate_slope(const std::vector<RegretPoint>& points, double gap, FitRange range = {}) {
  std::vector<std::pair<double, double>> xy;
  FitRange used{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : points) {
    if (p.horizon >= range.min_horizon && p.horizon <= range.max_horizon) {
      xy.emplace_back(std::log(p.horizon), gap * p.mean_regret);
      used.min_horizon = std::min(used.min_horizon, p.horizon);
      used.max_horizon = std::max(used.max_horizon, p.horizon);
    }
  }
  if (xy.size() < 3) throw std::domain_error("estimate_slope: need at least 3 points in the fit range");
  const double n = static_cast<double>(xy.size());
  double mx = 0.0, my = 0.0;
  for (auto [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::domain_error("estimate_slope: horizons in the fit range must differ");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (auto [x, y] : xy) {
    const double r = y - (fit.intercept + fit.slope * x);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.fit_range = used;
  fit.points = xy.size();
  return fit;
}

}  // namespace twoarm
