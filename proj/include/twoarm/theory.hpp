#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "twoarm/core_types.hpp"
#include "twoarm/policies.hpp"
#include "twoarm/special_functions.hpp"

namespace twoarm {

enum class StrategyClass : std::uint8_t { all, etc, detc };
enum class ParameterClass : std::uint8_t { h, h_delta };

/// The requested table cell has no value (no uniformly efficient strategy exists).
class not_applicable_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// C such that uniformly efficient strategies in the class have regret at
/// least C log(T) / Δ asymptotically.
inline double lower_bound_constant(StrategyClass cls, ParameterClass pcls) {
  if (pcls == ParameterClass::h) {
    switch (cls) {
      case StrategyClass::all: return 2.0;
      case StrategyClass::etc: return 4.0;
      case StrategyClass::detc: throw not_applicable_error("NA: no uniformly efficient fixed-design strategy on H");
    }
  } else {
    switch (cls) {
      case StrategyClass::all: return 0.5;
      case StrategyClass::etc: return 1.0;
      case StrategyClass::detc: return 4.0;
    }
  }
  throw contract_error("unknown strategy/parameter class");
}

/// c such that R(T) ~ c log(T) / Δ for the given strategy.
inline double asymptotic_slope(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::fb_etc: return 4.0;
    case PolicyKind::sprt_etc: return 1.0;
    case PolicyKind::bai_etc: return 4.0;
    case PolicyKind::delta_ucb: return 0.5;
    case PolicyKind::ucb_star: return 2.0;
  }
  throw contract_error("unknown policy kind");
}

namespace detail {

inline void require_bound_args(double horizon, double gap) {
  if (!(horizon >= 1.0) || !std::isfinite(horizon)) throw std::domain_error("horizon must be >= 1");
  if (!(gap > 0.0) || !std::isfinite(gap)) throw std::domain_error("gap must be positive");
}

}  // namespace detail

/// Upper bound on FB-ETC regret with the Lambert-W budget n̄.
inline BoundReport fb_etc_bound(double horizon, double gap) {
  detail::require_bound_args(horizon, gap);
  const double x = horizon * gap * gap;
  BoundReport r;
  r.regime_ok = x > 4.0 * std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
  r.fallback_value = horizon * gap / 2.0 + gap;
  r.minimax_value = 2.04 * std::sqrt(horizon) + gap;
  r.value = r.regime_ok ? 4.0 / gap * std::log(x / 4.46) -
                              2.0 / gap * std::log(std::log(x / (4.0 * std::sqrt(2.0 * std::numbers::pi)))) + gap
                        : r.fallback_value;
  return r;
}

/// Exact FB-ETC regret with n pulls per arm: Δ (n + (T - 2n) Φ(-Δ sqrt(n/2))).
inline double fb_etc_exact_regret(std::int64_t horizon, double gap, std::int64_t n) {
  if (n < 1 || 2 * n > horizon) throw std::domain_error("fb_etc_exact_regret: need 1 <= n <= T/2");
  if (!(gap >= 0.0)) throw std::domain_error("fb_etc_exact_regret: gap must be nonnegative");
  if (gap == 0.0) return 0.0;
  const double nd = static_cast<double>(n);
  const double commit_steps = static_cast<double>(horizon - 2 * n);
  return gap * (nd + commit_steps * std_normal_cdf(-gap * std::sqrt(nd / 2.0)));
}

struct FbEtcLowerBound {
  double value = 0.0;    // the T^ε blow-up bound, clamped at 0
  double trivial = 0.0;  // nΔ
};

/// Lower bound on FB-ETC regret for too-small budgets n <= 4(1-ε) log(T) / Δ².
inline FbEtcLowerBound fb_etc_lower_bound(std::int64_t horizon, double gap, std::int64_t n, double epsilon) {
  if (horizon < 2) throw std::domain_error("fb_etc_lower_bound: horizon must be >= 2");
  if (!(gap > 0.0)) throw std::domain_error("fb_etc_lower_bound: gap must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("fb_etc_lower_bound: epsilon must lie in (0,1)");
  const double T = static_cast<double>(horizon);
  const double logT = std::log(T);
  const double nd = static_cast<double>(n);
  if (n < 1 || nd > 4.0 * (1.0 - epsilon) * logT / (gap * gap)) {
    throw std::domain_error("fb_etc_lower_bound: need 1 <= n <= 4(1-eps) log(T) / gap^2");
  }
  FbEtcLowerBound out;
  out.trivial = nd * gap;
  const double first = 1.0 - 2.0 / (nd * gap * gap);
  const double second = 1.0 - 8.0 * logT / (gap * gap * T);
  if (first > 0.0 && second > 0.0) {
    out.value = first * second * gap * std::pow(T, epsilon) / (2.0 * std::sqrt(std::numbers::pi * logT));
  }
  return out;
}

inline BoundReport sprt_bound(double horizon, double gap) {
  detail::require_bound_args(horizon, gap);
  const double x = horizon * gap * gap;
  BoundReport r;
  r.regime_ok = x >= 1.0;
  r.fallback_value = horizon * gap / 2.0 + gap;
  r.minimax_value = 10.0 * std::sqrt(horizon / std::numbers::e) + gap;
  r.value = r.regime_ok ? std::log(std::numbers::e * x) / gap + (4.0 * std::sqrt(std::log(x)) + 4.0) / gap + gap
                        : r.fallback_value;
  return r;
}

inline BoundReport bai_etc_bound(double horizon, double gap) {
  detail::require_bound_args(horizon, gap);
  const double x = horizon * gap * gap;
  BoundReport r;
  r.regime_ok = x > 4.0 * std::numbers::e * std::numbers::e;
  r.fallback_value = horizon * gap;
  r.minimax_value = 32.0 * std::sqrt(horizon) + 2.0 * gap;
  if (r.regime_ok) {
    const double l = std::log(x / 4.0);
    r.value = 4.0 * l / gap + 334.0 * std::sqrt(l) / gap + 178.0 / gap + 2.0 * gap;
  } else {
    r.value = r.fallback_value;
  }
  return r;
}

inline BoundReport delta_ucb_bound(double horizon, double gap) {
  detail::require_bound_args(horizon, gap);
  const double eps = delta_ucb_epsilon(horizon, gap);
  const double x = horizon * gap * gap;
  const double e = std::numbers::e;
  BoundReport r;
  const double margin = 2.0 * gap - 3.0 * eps;
  r.regime_ok = horizon * margin * margin >= 2.0 && horizon * eps * eps >= e * e;
  r.fallback_value = horizon * gap;
  r.minimax_value = 328.0 * std::sqrt(horizon) + 5.0 * gap;
  if (r.regime_ok) {
    const double l = std::log(2.0 * x);
    const double a = 1.0 - 3.0 * eps / (2.0 * gap);
    const double b = 1.0 - 3.0 * eps / gap;
    r.value = l / (2.0 * gap * a * a) + std::sqrt(std::numbers::pi * l) / (2.0 * gap * b * b) +
              gap * (30.0 * e * std::sqrt(std::log(eps * eps * horizon)) / (eps * eps) + 80.0 / (eps * eps) +
                     2.0 / (margin * margin)) +
              5.0 * gap;
  } else {
    r.value = r.fallback_value;
  }
  return r;
}

/// UCB* bound for a free slack ε in (0, Δ).
inline BoundReport ucb_star_bound(double horizon, double gap, double epsilon) {
  detail::require_bound_args(horizon, gap);
  if (!(epsilon > 0.0 && epsilon < gap)) throw std::domain_error("ucb_star_bound: need 0 < epsilon < gap");
  const double x = horizon * gap * gap;
  const double e = std::numbers::e;
  BoundReport r;
  r.regime_ok = horizon * (gap - epsilon) * (gap - epsilon) >= 2.0 && horizon * epsilon * epsilon >= e * e;
  r.fallback_value = horizon * gap;
  r.minimax_value = 33.0 * std::sqrt(horizon) + gap;
  if (r.regime_ok) {
    const double shrink = (1.0 - epsilon / gap) * (1.0 - epsilon / gap);
    const double l = std::log(x / 2.0);
    r.value = 2.0 * l / (gap * shrink) + 2.0 * std::sqrt(std::numbers::pi * l) / (gap * shrink) +
              gap * (30.0 * e * std::sqrt(std::log(epsilon * epsilon * horizon)) + 16.0 * e) / (epsilon * epsilon) +
              2.0 / (gap * shrink) + gap;
  } else {
    r.value = r.fallback_value;
  }
  return r;
}

/// UCB* bound with ε = Δ log^{-1/8}(T). For T <= e that ε is not below Δ and
/// only the fallback applies.
inline BoundReport ucb_star_bound(double horizon, double gap) {
  detail::require_bound_args(horizon, gap);
  const double eps = horizon > std::numbers::e ? gap * std::pow(std::log(horizon), -0.125) : gap;
  if (eps < gap) return ucb_star_bound(horizon, gap, eps);
  BoundReport r;
  r.fallback_value = horizon * gap;
  r.minimax_value = 33.0 * std::sqrt(horizon) + gap;
  r.value = r.fallback_value;
  return r;
}

/// Finite-time regret bound for `kind` (gap-aware kinds assume the true gap is known).
inline BoundReport regret_bound(PolicyKind kind, double horizon, double gap) {
  switch (kind) {
    case PolicyKind::fb_etc: return fb_etc_bound(horizon, gap);
    case PolicyKind::sprt_etc: return sprt_bound(horizon, gap);
    case PolicyKind::bai_etc: return bai_etc_bound(horizon, gap);
    case PolicyKind::delta_ucb: return delta_ucb_bound(horizon, gap);
    case PolicyKind::ucb_star: return ucb_star_bound(horizon, gap);
  }
  throw contract_error("unknown policy kind");
}

/// min(bound-or-fallback, minimax): the tightest available statement.
inline double tightest_bound(const BoundReport& r) { return std::min(r.value, r.minimax_value); }

struct TasResult {
  double t_star = 0.0;
  std::vector<double> weights;
};

namespace detail {

// For a fixed w1, the common value v of g_a = (w1 w_a / (w1 + w_a)) Δ_a² / 2
// at which the implied w_a = c_a w1 / (w1 - c_a), c_a = 2v/Δ_a², fill the
// remaining mass 1 - w1. The mass is increasing in v, so bisect.
inline double equalized_value(double w1, const std::vector<double>& gaps, std::vector<double>* weights) {
  double min_sq = gaps[0] * gaps[0];
  for (double g : gaps) min_sq = std::min(min_sq, g * g);
  auto mass = [&](double v) {
    double total = 0.0;
    for (double g : gaps) {
      const double c = 2.0 * v / (g * g);
      total += c * w1 / (w1 - c);
    }
    return total;
  };
  double lo = 0.0;
  double hi = w1 * min_sq / 2.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mass(mid) < 1.0 - w1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);
  if (weights) {
    weights->assign(1, w1);
    for (double g : gaps) {
      const double c = 2.0 * v / (g * g);
      weights->push_back(c * w1 / (w1 - c));
    }
  }
  return v;
}

}  // namespace detail

/// Characteristic time T*(μ) of Gaussian best-arm identification with unit
/// variance, and its optimal sampling proportions. `means[0]` must be the
/// unique best arm. Maximizes over w1 by golden-section search, equalizing
/// the K-1 pairwise terms for each candidate w1; `tolerance` is the final
/// width of the w1 bracket.
inline TasResult tas_characteristic(const std::vector<double>& means, double tolerance = 1e-12) {
  if (means.size() < 2) throw std::domain_error("tas_characteristic: need at least two arms");
  for (double m : means) {
    if (!std::isfinite(m)) throw std::domain_error("tas_characteristic: means must be finite");
  }
  std::vector<double> gaps;
  for (std::size_t a = 1; a < means.size(); ++a) {
    if (!(means[0] > means[a])) throw std::domain_error("tas_characteristic: arm 1 must be the unique best arm");
    gaps.push_back(means[0] - means[a]);
  }
  if (!(tolerance > 0.0)) throw std::domain_error("tas_characteristic: tolerance must be positive");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = detail::equalized_value(c, gaps, nullptr);
  double fd = detail::equalized_value(d, gaps, nullptr);
  while (b - a > tolerance) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = detail::equalized_value(d, gaps, nullptr);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = detail::equalized_value(c, gaps, nullptr);
    }
    if (c >= d) break;
  }
  TasResult out;
  const double v = detail::equalized_value(0.5 * (a + b), gaps, &out.weights);
  out.t_star = 1.0 / v;
  return out;
}

struct TasConstants {
  double track_and_stop = 0.0;  // T* Σ_a w_a (μ1 - μ_a)
  double lai_robbins = 0.0;     // Σ_a 2 / (μ1 - μ_a)
  double ratio() const { return track_and_stop / lai_robbins; }
};

/// Asymptotic regret constants (coefficients of log T) of the Track-and-Stop
/// ETC strategy and of the Lai-Robbins lower bound.
inline TasConstants tas_regret_constant(const std::vector<double>& means, double tolerance = 1e-12) {
  const TasResult tas = tas_characteristic(means, tolerance);
  TasConstants out;
  double weighted = 0.0;
  for (std::size_t a = 1; a < means.size(); ++a) {
    const double gap = means[0] - means[a];
    weighted += tas.weights[a] * gap;
    out.lai_robbins += 2.0 / gap;
  }
  out.track_and_stop = tas.t_star * weighted;
  return out;
}

}  // namespace twoarm
