#pragma once

#include <fftw3.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

// Discrete cosine analysis of even functions on [0, M dx], used as an independent Fourier
// oracle. The truncation error of these 1/x kernels is ~1/(M dx) with a phase that repeats
// when M dx is a whole number of 2 pi periods, so one Richardson step over M -> 2M removes it.
namespace dct {

inline std::vector<double> redft00(std::vector<double> in) {
  std::vector<double> out(in.size());
  fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(in.size()), in.data(), out.data(), FFTW_REDFT00, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

inline std::vector<double> sample(const std::function<double(double)>& f, long M, double dx) {
  std::vector<double> v(static_cast<std::size_t>(M + 1));
  for (long n = 0; n <= M; ++n) v[static_cast<std::size_t>(n)] = f(n * dx);
  return v;
}

/// Unitary transform of an even f at lambda_m = pi m / (M dx), m = 0..M.
inline std::vector<double> transform(const std::function<double(double)>& f, long M, double dx) {
  auto y = redft00(sample(f, M, dx));
  for (auto& v : y) v *= dx / std::sqrt(2.0 * std::numbers::pi);
  return y;
}

/// Applies a frequency mask w(lambda) to f and returns the result at x_n = n dx.
inline std::vector<double> filter(const std::function<double(double)>& f, const std::function<double(double)>& w,
                                  long M, double dx) {
  auto y = redft00(sample(f, M, dx));
  for (long m = 0; m <= M; ++m) y[static_cast<std::size_t>(m)] *= w(std::numbers::pi * m / (M * dx));
  auto x = redft00(std::move(y));
  for (auto& v : x) v /= 2.0 * M;
  return x;
}

/// 2 a(2M) - a(M) on the coarse grid.
inline std::vector<double> richardson(const std::vector<double>& coarse, const std::vector<double>& fine, long stride) {
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) out[i] = 2.0 * fine[i * static_cast<std::size_t>(stride)] - coarse[i];
  return out;
}

}  // namespace dct
