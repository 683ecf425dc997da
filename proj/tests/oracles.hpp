#pragma once

// Reference computations shared by the unit and acceptance tests. These are
// deliberately written without any library code so they can serve as
// independent checks.

#include <cmath>
#include <numbers>

namespace oracle {

/// Composite Simpson rule on [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and standard deviation of N(mu, sigma) restricted to [lo, hi], by
/// numerical quadrature of the unnormalized density.
inline Moments truncated_gaussian(double mu, double sigma, double lo, double hi) {
  auto pdf = [&](double x) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z);
  };
  const double z0 = simpson(pdf, lo, hi);
  const double m1 = simpson([&](double x) { return x * pdf(x); }, lo, hi) / z0;
  const double m2 = simpson([&](double x) { return (x - m1) * (x - m1) * pdf(x); }, lo, hi) / z0;
  return {m1, std::sqrt(m2)};
}

/// Mean and std of N(mu, sigma) clipped to [lo, hi] (point masses at the
/// bounds), by quadrature.
inline Moments clamped_gaussian(double mu, double sigma, double lo, double hi) {
  auto pdf = [&](double x) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2)); };
  const double p_lo = cdf(lo);
  const double p_hi = 1.0 - cdf(hi);
  const double m1 = p_lo * lo + p_hi * hi + simpson([&](double x) { return x * pdf(x); }, lo, hi);
  const double m2 = p_lo * (lo - m1) * (lo - m1) + p_hi * (hi - m1) * (hi - m1) +
                    simpson([&](double x) { return (x - m1) * (x - m1) * pdf(x); }, lo, hi);
  return {m1, std::sqrt(m2)};
}

}  // namespace oracle
