#pragma once

#include <cmath>
#include <vector>

#include "hypercross/parallel.hpp"

namespace hypercross {

/// Result of integrating F(x) = P(x) / x^p over [0, inf) with P periodic and nonnegative.
/// The bulk [0, K*period] is a composite midpoint sum; the tail is bracketed analytically.
struct HalfLineIntegral {
  double bulk = 0.0;
  double tail_lower = 0.0;
  double tail_upper = 0.0;
  double period = 0.0;
  long periods = 0;            // K
  long points_per_period = 0;  // midpoint nodes per period
  double period_integral = 0.0;

  double T() const noexcept { return period * static_cast<double>(periods); }
  double lower() const noexcept { return bulk + tail_lower; }
  double upper() const noexcept { return bulk + tail_upper; }
  double mid() const noexcept { return bulk + 0.5 * (tail_lower + tail_upper); }
};

/// Bounds on sum_{k >= K} k^{-p} for p > 1, K >= 1.
inline double zeta_tail_lower(double p, double K) { return std::pow(K, 1.0 - p) / (p - 1.0); }
inline double zeta_tail_upper(double p, double K) { return std::pow(K, -p) + std::pow(K, 1.0 - p) / (p - 1.0); }

/// Midpoint sums of f over periods [k*tau, (k+1)*tau) for k in [first, last), one partial per period.
template <class F>
void period_sums_serial(const F& f, double tau, long n, long first, long last, std::vector<double>& out) {
  const double h = tau / static_cast<double>(n);
  out.resize(static_cast<std::size_t>(last - first));
  for (long k = first; k < last; ++k) {
    double acc = 0.0;
    const double base = static_cast<double>(k) * tau;
    for (long i = 0; i < n; ++i) acc += f(base + (static_cast<double>(i) + 0.5) * h);
    out[static_cast<std::size_t>(k - first)] = acc * h;
  }
}

template <class F>
void period_sums_parallel(const F& f, double tau, long n, long first, long last, std::vector<double>& out) {
  const double h = tau / static_cast<double>(n);
  out.resize(static_cast<std::size_t>(last - first));
#pragma omp parallel for schedule(static)
  for (long k = first; k < last; ++k) {
    double acc = 0.0;
    const double base = static_cast<double>(k) * tau;
    for (long i = 0; i < n; ++i) acc += f(base + (static_cast<double>(i) + 0.5) * h);
    out[static_cast<std::size_t>(k - first)] = acc * h;
  }
}

/// Integrates f(x) = envelope(x) / x^p over [0, inf), where envelope is tau-periodic and
/// nonnegative and f is bounded near 0. Writing the tail as
///   sum_{k >= K} int_0^tau envelope(u) (k tau + u)^{-p} du
/// and bounding (k tau + u)^{-p} between ((k+1) tau)^{-p} and (k tau)^{-p} brackets it by
/// I_P tau^{-p} sum k^{-p} with I_P the one-period integral of the envelope.
template <class F, class Envelope>
HalfLineIntegral integrate_periodic_tail(const F& f, const Envelope& envelope, double tau, double p,
                                         long points_per_period, long periods, bool parallel = true) {
  HalfLineIntegral out;
  out.period = tau;
  out.periods = periods;
  out.points_per_period = points_per_period;
  std::vector<double> partials;
  if (parallel)
    period_sums_parallel(f, tau, points_per_period, 0, periods, partials);
  else
    period_sums_serial(f, tau, points_per_period, 0, periods, partials);
  out.bulk = ordered_sum(partials);
  std::vector<double> one;
  period_sums_serial(envelope, tau, points_per_period, 0, 1, one);
  out.period_integral = one[0];
  const double scale = out.period_integral * std::pow(tau, -p);
  const double K = static_cast<double>(periods);
  out.tail_lower = scale * zeta_tail_lower(p, K + 1.0);
  out.tail_upper = scale * zeta_tail_upper(p, K);
  return out;
}

}  // namespace hypercross
