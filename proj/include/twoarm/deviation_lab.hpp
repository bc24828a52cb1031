#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoarm/core_types.hpp"
#include "twoarm/montecarlo.hpp"
#include "twoarm/parallel.hpp"
#include "twoarm/policies.hpp"
#include "twoarm/random.hpp"
#include "twoarm/special_functions.hpp"

namespace twoarm {

/// Empirical side of one probability inequality next to its bound.
struct DeviationReport {
  std::string check;
  double bound_value = 0.0;
  double empirical_value = 0.0;
  double empirical_stderr = 0.0;
  std::int64_t reps = 0;
  bool passed = false;  // empirical <= bound + 3 * stderr
  std::optional<double> exact_value;
  std::optional<std::int64_t> truncation_cap;

  static constexpr double kStderrMultiple = 3.0;

  bool consistent() const { return passed == (empirical_value <= bound_value + kStderrMultiple * empirical_stderr); }

  /// |empirical - exact| <= k * stderr; false when no exact value is known.
  bool agrees_with_exact(double k = kStderrMultiple) const {
    return exact_value && std::abs(empirical_value - *exact_value) <= k * empirical_stderr;
  }
};

struct DeviationOptions {
  unsigned threads = 1;
  std::int64_t chunk = 256;
};

namespace detail {

// Stream keys, disjoint from the policy ordinals used by the regret engine.
inline constexpr std::uint64_t kLemmaAKey = 0x1a;
inline constexpr std::uint64_t kLemmaBKey = 0x1b;
inline constexpr std::uint64_t kLemmaCKey = 0x1c;
inline constexpr std::uint64_t kReflectionKey = 0x1d;

inline void require_reps(std::int64_t reps) {
  if (reps < 2) throw std::domain_error("deviation check needs at least 2 replications");
}

/// Runs `sample(stream)` once per replication and summarizes in index order.
template <class Sample>
SampleSummary replicate(std::int64_t reps, std::uint64_t seed, std::uint64_t key, std::uint64_t param_key,
                        const DeviationOptions& options, Sample sample) {
  std::vector<double> values(static_cast<std::size_t>(reps));
  parallel_chunks(reps, options.threads, options.chunk, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      GaussianStream stream(sub_seed(seed, key, param_key, static_cast<std::uint64_t>(i)));
      values[static_cast<std::size_t>(i)] = sample(stream);
    }
  });
  return summarize_samples(values, [](double v) { return v; });
}

inline DeviationReport make_report(std::string check, double bound, const SampleSummary& s, std::int64_t reps) {
  DeviationReport r;
  r.check = std::move(check);
  r.bound_value = bound;
  r.empirical_value = s.mean;
  r.empirical_stderr = s.std_error;
  r.reps = reps;
  r.passed = s.mean <= bound + DeviationReport::kStderrMultiple * s.std_error;
  return r;
}

inline std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace detail

inline std::int64_t lemma_a_default_cap(double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("check_lemma_a: epsilon must be positive");
  return static_cast<std::int64_t>(std::ceil(200.0 / (epsilon * epsilon)));
}

/// Mean of the time after which the running mean of a standard Gaussian walk
/// stays inside (-ε, ε), observed up to `horizon_cap`. Bound: 1 + 9/ε².
inline DeviationReport check_lemma_a(double epsilon, std::int64_t reps, std::optional<std::int64_t> horizon_cap,
                                     std::uint64_t seed, const DeviationOptions& options = {}) {
  const std::int64_t cap = horizon_cap ? *horizon_cap : lemma_a_default_cap(epsilon);
  if (!(epsilon > 0.0)) throw std::domain_error("check_lemma_a: epsilon must be positive");
  if (cap < 1) throw std::domain_error("check_lemma_a: horizon cap must be at least 1");
  detail::require_reps(reps);
  const auto s = detail::replicate(reps, seed, detail::kLemmaAKey, detail::bits_of(epsilon) ^ static_cast<std::uint64_t>(cap),
                                   options, [&](GaussianStream& g) {
                                     double sum = 0.0;
                                     std::int64_t last = 0;
                                     for (std::int64_t n = 1; n <= cap; ++n) {
                                       sum += g.standard();
                                       if (std::abs(sum) >= epsilon * static_cast<double>(n)) last = n;
                                     }
                                     return static_cast<double>(last + 1);
                                   });
  auto r = detail::make_report("lemma_a", 1.0 + 9.0 / (epsilon * epsilon), s, reps);
  r.truncation_cap = cap;
  return r;
}

inline DeviationReport check_lemma_a(double epsilon, std::int64_t reps, std::uint64_t seed,
                                     const DeviationOptions& options = {}) {
  return check_lemma_a(epsilon, reps, std::nullopt, seed, options);
}

inline double lemma_b_bound(double horizon, double gap) {
  const double u = horizon * gap * gap / 2.0;
  if (!(gap > 0.0) || !(u >= 1.0)) throw std::domain_error("lemma b needs gap > 0 and T*gap^2 >= 2");
  const double l = std::log(u);
  return (2.0 * l + 2.0 * std::sqrt(std::numbers::pi * l) + 2.0) / (gap * gap) + 1.0;
}

/// Σ_{n≤T} P(N(0,1/n) + sqrt((2/n) log(T/n)) >= Δ), term by term.
inline double lemma_b_exact(std::int64_t horizon, double gap) {
  const double T = static_cast<double>(horizon);
  double total = 0.0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double nn = static_cast<double>(n);
    const double b = std::sqrt(2.0 / nn * std::log(T / nn));
    total += std_normal_cdf(-std::sqrt(nn) * (gap - b));
  }
  return total;
}

/// Expected number of n <= T at which the running mean plus its confidence
/// bonus reaches Δ. Reports the Monte Carlo count and the exact sum.
inline DeviationReport check_lemma_b(double gap, std::int64_t horizon, std::int64_t reps, std::uint64_t seed,
                                     const DeviationOptions& options = {}) {
  const double bound = lemma_b_bound(static_cast<double>(horizon), gap);
  detail::require_reps(reps);
  // Event at n: S_n >= n·Δ - sqrt(2 n log(T/n)).
  std::vector<double> level(static_cast<std::size_t>(horizon));
  const double T = static_cast<double>(horizon);
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double nn = static_cast<double>(n);
    level[static_cast<std::size_t>(n - 1)] = nn * gap - std::sqrt(2.0 * nn * std::log(T / nn));
  }
  const auto s = detail::replicate(reps, seed, detail::kLemmaBKey,
                                   detail::bits_of(gap) ^ static_cast<std::uint64_t>(horizon), options,
                                   [&](GaussianStream& g) {
                                     double sum = 0.0;
                                     std::int64_t count = 0;
                                     for (double lv : level) {
                                       sum += g.standard();
                                       if (sum >= lv) ++count;
                                     }
                                     return static_cast<double>(count);
                                   });
  auto r = detail::make_report("lemma_b", bound, s, reps);
  r.exact_value = lemma_b_exact(horizon, gap);
  return r;
}

inline double lemma_c_bound(double horizon, double epsilon) {
  const double u = epsilon * epsilon * horizon;
  if (!(epsilon > 0.0) || !(u >= std::numbers::e * std::numbers::e * (1.0 - 1e-12))) {
    throw std::domain_error("lemma c needs epsilon > 0 and T*epsilon^2 >= e^2");
  }
  return (30.0 * std::numbers::e * std::sqrt(std::log(u)) + 16.0 * std::numbers::e) / u;
}

/// Probability that the running mean plus bonus plus ε drops to zero or below
/// at some s <= T.
inline DeviationReport check_lemma_c(double epsilon, std::int64_t horizon, std::int64_t reps, std::uint64_t seed,
                                     const DeviationOptions& options = {}) {
  const double bound = lemma_c_bound(static_cast<double>(horizon), epsilon);
  detail::require_reps(reps);
  // Event at s: S_s <= -(sqrt(2 s log(T/s)) + s·ε).
  std::vector<double> level(static_cast<std::size_t>(horizon));
  const double T = static_cast<double>(horizon);
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double nn = static_cast<double>(n);
    level[static_cast<std::size_t>(n - 1)] = -(std::sqrt(2.0 * nn * std::log(T / nn)) + nn * epsilon);
  }
  const auto s = detail::replicate(reps, seed, detail::kLemmaCKey,
                                   detail::bits_of(epsilon) ^ static_cast<std::uint64_t>(horizon), options,
                                   [&](GaussianStream& g) {
                                     double sum = 0.0;
                                     for (double lv : level) {
                                       sum += g.standard();
                                       if (sum <= lv) return 1.0;
                                     }
                                     return 0.0;
                                   });
  return detail::make_report("lemma_c", bound, s, reps);
}

/// P(some partial sum of n standard Gaussians reaches -x) against 2Φ(-x/√n).
/// For a discrete walk the left side is at most the right side.
inline DeviationReport check_reflection(double x, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                        const DeviationOptions& options = {}) {
  if (!(x > 0.0)) throw std::domain_error("check_reflection: x must be positive");
  if (n < 1) throw std::domain_error("check_reflection: n must be at least 1");
  detail::require_reps(reps);
  const auto s = detail::replicate(reps, seed, detail::kReflectionKey,
                                   detail::bits_of(x) ^ static_cast<std::uint64_t>(n), options,
                                   [&](GaussianStream& g) {
                                     double sum = 0.0;
                                     for (std::int64_t i = 0; i < n; ++i) {
                                       sum += g.standard();
                                       if (sum + x <= 0.0) return 1.0;
                                     }
                                     return 0.0;
                                   });
  const double rhs = 2.0 * std_normal_cdf(-x / std::sqrt(static_cast<double>(n)));
  auto r = detail::make_report("reflection", rhs, s, reps);
  r.exact_value = rhs;
  return r;
}

/// empirical / bound for the reflection check.
inline double reflection_ratio(const DeviationReport& r) { return r.empirical_value / r.bound_value; }

/// Frequency with which SPRT-ETC stops before T on the wrong arm, against 1/(TΔ²).
inline DeviationReport check_sprt_error(double gap, std::int64_t horizon, std::int64_t reps, std::uint64_t seed,
                                        const DeviationOptions& options = {}) {
  if (!(gap > 0.0)) throw std::domain_error("check_sprt_error: gap must be positive");
  const double u = static_cast<double>(horizon) * gap * gap;
  if (!(u > 1.0)) throw std::domain_error("check_sprt_error: T*gap^2 <= 1 makes the bound vacuous");
  detail::require_reps(reps);
  const PolicySpec spec(PolicyKind::sprt_etc, horizon, gap);
  const auto outcomes = simulate_replications(PreparedPolicy(spec), BanditInstance::with_gap(gap), seed, 0, reps,
                                              SimulationOptions{.threads = options.threads, .chunk = options.chunk});
  const auto s = summarize_samples(outcomes, [](const ReplicationOutcome& o) { return o.misidentified ? 1.0 : 0.0; });
  return detail::make_report("sprt_error", 1.0 / u, s, reps);
}

}  // namespace twoarm
