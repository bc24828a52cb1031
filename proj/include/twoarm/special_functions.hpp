#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace twoarm {

/// Principal branch of the Lambert W function on [0, inf): the x >= 0 with
/// x e^x = y.
///
/// Halley's iteration from an asymptotic seed. The root is kept inside a
/// bracket [lo, hi] that shrinks with every evaluation; whenever a Halley step
/// lands outside it the step is replaced by bisection, so the iteration cannot
/// diverge for any finite y.
inline double lambert_w(double y) {
  if (!(y >= 0.0)) throw std::domain_error("lambert_w: argument must be nonnegative");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return y;

  // W(y) <= y everywhere and W(y) <= log(y) for y >= e.
  double lo = 0.0;
  double hi = y < std::numbers::e ? std::min(y, 1.0) : std::log(y);
  double w;
  if (y < std::numbers::e) {
    w = std::log1p(y);
  } else {
    const double l1 = std::log(y);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  if (!(w > lo && w < hi)) w = 0.5 * (lo + hi);

  for (int iter = 0; iter < 100; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - y;
    if (f == 0.0) return w;
    if (f > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    const double fp = ew * (w + 1.0);
    const double fpp = ew * (w + 2.0);
    double next = w - f / (fp - 0.5 * f * fpp / fp);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + w)) {
      return next;
    }
    w = next;
  }
  return w;
}

inline double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal cdf via erfc, accurate in both tails.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Relative entropy kl(p, q) between Bernoulli(p) and Bernoulli(q), with the
/// convention 0 log 0 = 0. Infinite when q puts zero mass where p does not.
inline double bernoulli_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("bernoulli_kl: arguments must lie in [0, 1]");
  }
  if (p == q) return 0.0;
  auto term = [](double a, double b) {
    if (a == 0.0) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a * (std::log(a) - std::log(b));
  };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

}  // namespace twoarm
