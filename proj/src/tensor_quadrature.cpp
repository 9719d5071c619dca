#include "hypercross/tensor_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "hypercross/error.hpp"
#include "hypercross/kernels.hpp"
#include "hypercross/parallel.hpp"
#include "hypercross/quadrature.hpp"

namespace hypercross {

namespace {

using Mat = Eigen::MatrixXd;
constexpr double kTau = 2.0 * std::numbers::pi;

struct AxisTables {
  Mat near;  // K n rows: kernels at (i + 1/2) h
  Mat far;   // n rows: numerators on the first period
};

AxisTables make_tables(const std::vector<int>& levels, long n, int K, double h, bool squared) {
  const long rows = n * K;
  const int L = static_cast<int>(levels.size());
  AxisTables t{Mat(rows, L), Mat(n, L)};
  for (int a = 0; a < L; ++a) {
    for (long i = 0; i < rows; ++i) {
      const double v = level_kernel(levels[a], (static_cast<double>(i) + 0.5) * h);
      t.near(i, a) = squared ? v * v : v;
    }
    for (long i = 0; i < n; ++i) {
      const double v = level_kernel_numerator(levels[a], (static_cast<double>(i) + 0.5) * h);
      t.far(i, a) = squared ? v * v : v;
    }
  }
  return t;
}

inline double power_abs(double v, double e) {
  if (e == 2.0) return v * v;
  if (e == 1.0) return std::abs(v);
  if (e == 4.0) {
    const double w = v * v;
    return w * w;
  }
  return std::pow(std::abs(v), e);
}

// Coefficients laid out for the contraction: d=1 a vector (as L0 x 1), d=2 a matrix, d=3 one
// L1 x L2 matrix per axis-0 slot.
struct CoeffTensor {
  std::vector<Mat> slices;
};

CoeffTensor coeff_tensor(const BlockFunction& f, const AxisLevels& ax, bool squared) {
  const int d = f.dim();
  CoeffTensor T;
  const int L0 = static_cast<int>(ax.levels[0].size());
  if (d == 1) {
    T.slices.assign(1, Mat::Zero(L0, 1));
  } else if (d == 2) {
    T.slices.assign(1, Mat::Zero(L0, static_cast<Eigen::Index>(ax.levels[1].size())));
  } else {
    T.slices.assign(static_cast<std::size_t>(L0),
                    Mat::Zero(static_cast<Eigen::Index>(ax.levels[1].size()), static_cast<Eigen::Index>(ax.levels[2].size())));
  }
  for (const auto& [s, c] : f.coeffs()) {
    const double v = squared ? c * c : c;
    if (d == 1)
      T.slices[0](ax.slot(0, s[0]), 0) = v;
    else if (d == 2)
      T.slices[0](ax.slot(0, s[0]), ax.slot(1, s[1])) = v;
    else
      T.slices[static_cast<std::size_t>(ax.slot(0, s[0]))](ax.slot(1, s[1]), ax.slot(2, s[2])) = v;
  }
  return T;
}

double contract_sum(const std::vector<const Mat*>& G, const CoeffTensor& C, double e, bool parallel) {
  const std::size_t d = G.size();
  if (d == 1) {
    const Eigen::VectorXd V = (*G[0]) * C.slices[0].col(0);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < V.size(); ++i) acc += power_abs(V(i), e);
    return acc;
  }
  if (d == 2) {
    const Mat& G0 = *G[0];
    const Mat G1t = G[1]->transpose();
    constexpr Eigen::Index chunk = 64;
    const Eigen::Index rows = G0.rows();
    const int chunks = static_cast<int>((rows + chunk - 1) / chunk);
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 0; k < chunks; ++k) {
      const Eigen::Index r0 = k * chunk, m = std::min(chunk, rows - r0);
      const Mat V = (G0.middleRows(r0, m) * C.slices[0]) * G1t;
      double acc = 0.0;
      for (Eigen::Index j = 0; j < V.cols(); ++j)
        for (Eigen::Index i = 0; i < V.rows(); ++i) acc += power_abs(V(i, j), e);
      partial[static_cast<std::size_t>(k)] = acc;
    }
    return ordered_sum(partial);
  }
  const Mat& G0 = *G[0];
  const Mat& G1 = *G[1];
  const Mat G2t = G[2]->transpose();
  const int rows = static_cast<int>(G0.rows());
  std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i0 = 0; i0 < rows; ++i0) {
    Mat Cp = Mat::Zero(C.slices[0].rows(), C.slices[0].cols());
    for (std::size_t a = 0; a < C.slices.size(); ++a) Cp += G0(i0, static_cast<Eigen::Index>(a)) * C.slices[a];
    const Mat V = G1 * Cp * G2t;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < V.cols(); ++j)
      for (Eigen::Index i = 0; i < V.rows(); ++i) acc += power_abs(V(i, j), e);
    partial[static_cast<std::size_t>(i0)] = acc;
  }
  return ordered_sum(partial);
}

double reference_sum(const std::vector<const Mat*>& G, const BlockFunction& f, const AxisLevels& ax, bool squared,
                     double e) {
  const int d = f.dim();
  std::vector<std::vector<int>> slots;
  std::vector<double> coef;
  for (const auto& [s, c] : f.coeffs()) {
    std::vector<int> sl(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) sl[j] = ax.slot(j, s[j]);
    slots.push_back(std::move(sl));
    coef.push_back(squared ? c * c : c);
  }
  std::vector<int> upper(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) upper[j] = static_cast<int>(G[j]->rows()) - 1;
  double acc = 0.0;
  for_each_in_box(upper, [&](std::span<const int> idx) {
    double v = 0.0;
    for (std::size_t b = 0; b < coef.size(); ++b) {
      double t = coef[b];
      for (int j = 0; j < d; ++j) t *= (*G[j])(idx[j], slots[b][j]);
      v += t;
    }
    acc += power_abs(v, e);
  });
  return acc;
}

int resolve_ppu(const BlockFunction& f, int requested) {
  const int top = f.max_level();
  if (top > 20) throw ResolutionError("tensor quadrature is limited to levels <= 20");
  const int ppu = requested > 0 ? requested : 8 * (1 << top);
  if (static_cast<double>(ppu) < 4.0 * std::ldexp(1.0, top)) {
    std::ostringstream os;
    os << "points_per_unit=" << ppu << " cannot resolve level " << top;
    throw ResolutionError(os.str());
  }
  return ppu;
}

TensorIntegral orthant_integral(const BlockFunction& f, double e, double decay, bool squared,
                                const TensorQuadratureOptions& opts) {
  const int d = f.dim();
  if (d > 3) throw ConfigurationError("tensor-grid quadrature supports d <= 3");
  if (opts.periods < 1) throw ConfigurationError("tensor quadrature needs periods >= 1");
  const int ppu = resolve_ppu(f, opts.points_per_unit);
  const long n = static_cast<long>(std::ceil(kTau * ppu));
  const double h = kTau / static_cast<double>(n);
  const int K = opts.periods;
  TensorIntegral out;
  out.periods = K;
  out.points_per_unit = ppu;
  if (f.empty()) return out;

  const AxisLevels ax = axis_levels(f);
  std::vector<AxisTables> tables;
  for (int j = 0; j < d; ++j) tables.push_back(make_tables(ax.levels[j], n, K, h, squared));
  const CoeffTensor C = coeff_tensor(f, ax, squared);

  const double far_lo = std::pow(kTau, -decay) * zeta_tail_lower(decay, K + 1.0);
  const double far_hi = std::pow(kTau, -decay) * zeta_tail_upper(decay, K);
  const double cell = std::pow(h, d) * std::ldexp(1.0, d);  // orthant -> R^d
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<const Mat*> G;
    int far = 0;
    for (int j = 0; j < d; ++j) {
      const bool is_far = (mask >> j) & 1;
      far += is_far;
      G.push_back(is_far ? &tables[j].far : &tables[j].near);
    }
    const double S = opts.reference ? reference_sum(G, f, ax, squared, e) : contract_sum(G, C, e, opts.parallel);
    const double J = S * cell;
    if (mask == 0) {
      out.bulk = J;
    } else {
      out.tail_lower += J * std::pow(far_lo, far);
      out.tail_upper += J * std::pow(far_hi, far);
    }
  }
  return out;
}

TensorNorm auto_norm(const BlockFunction& f, double e, double decay, bool squared, const TensorQuadratureOptions& opts) {
  TensorNorm out;
  if (f.empty()) return out;
  const int ppu = resolve_ppu(f, opts.points_per_unit);
  const double n = std::ceil(kTau * ppu);
  auto finish = [&](const TensorIntegral& I) {
    TensorNorm r;
    r.lower = std::pow(I.lower(), 1.0 / decay);
    r.upper = std::pow(I.upper(), 1.0 / decay);
    r.value = std::pow(I.mid(), 1.0 / decay);
    r.periods = I.periods;
    r.points_per_unit = I.points_per_unit;
    return r;
  };
  TensorQuadratureOptions o = opts;
  o.points_per_unit = ppu;
  if (opts.periods > 0) {
    out = finish(orthant_integral(f, e, decay, squared, o));
    if (out.upper - out.lower > opts.rel_tol * out.value) {
      std::ostringstream os;
      os << "tensor quadrature bracket " << (out.upper - out.lower) / out.value << " exceeds rel_tol at K=" << o.periods;
      throw AccuracyError(os.str(), out.value, out.upper - out.lower);
    }
    return out;
  }
  for (o.periods = 4;; o.periods *= 2) {
    if (std::pow(n * o.periods, f.dim()) > opts.max_points) {
      std::ostringstream os;
      os << "tensor quadrature could not reach rel_tol=" << opts.rel_tol << " within " << opts.max_points << " points";
      throw AccuracyError(os.str(), out.value, out.upper - out.lower);
    }
    out = finish(orthant_integral(f, e, decay, squared, o));
    if (out.upper - out.lower <= opts.rel_tol * out.value) return out;
  }
}

void require_exponent(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("tensor quadrature needs an exponent in (1, inf)");
}

}  // namespace

DifferenceNorm tensor_difference_norm(const BlockFunction& f, int l, std::span<const double> h,
                                      std::span<const int> e, double q, double T, int points_per_unit,
                                      bool parallel) {
  require_exponent(q);
  const int d = f.dim();
  if (d > 3) throw ConfigurationError("tensor-grid quadrature supports d <= 3");
  if (static_cast<int>(h.size()) != d) throw DomainError("difference step must have one entry per axis");
  if (l < 1) throw DomainError("difference order must be >= 1");
  DifferenceNorm out;
  const int ppu = resolve_ppu(f, points_per_unit);
  out.points_per_unit = ppu;
  std::vector<bool> on(static_cast<std::size_t>(d), false);
  for (int j : e) on.at(static_cast<std::size_t>(j)) = true;
  double reach = 0.0;
  for (int j = 0; j < d; ++j) {
    if (!on[j] && h[j] != 0.0) throw DomainError("difference step must vanish off the axis subset");
    reach = std::max(reach, l * std::abs(h[j]));
  }
  out.T = T > 0.0 ? T : 32.0;
  if (!(out.T > reach + 1.0)) throw ConfigurationError("truncation radius too small for the difference step");
  if (f.empty()) return out;

  const long nodes = static_cast<long>(std::ceil(2.0 * out.T * ppu));
  const double dx = 2.0 * out.T / static_cast<double>(nodes);
  std::vector<double> binom(static_cast<std::size_t>(l + 1), 1.0);
  for (int n = 1; n <= l; ++n) binom[n] = binom[n - 1] * (l - n + 1) / n;

  const AxisLevels ax = axis_levels(f);
  std::vector<Mat> G;
  std::vector<std::vector<double>> inside(static_cast<std::size_t>(d)), outside(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const auto& lv = ax.levels[j];
    const int L = static_cast<int>(lv.size());
    Mat g(nodes, L);
    for (int a = 0; a < L; ++a)
      for (long i = 0; i < nodes; ++i) {
        const double x = -out.T + (static_cast<double>(i) + 0.5) * dx;
        if (!on[j]) {
          g(i, a) = level_kernel(lv[a], x);
          continue;
        }
        double v = 0.0;
        for (int n = 0; n <= l; ++n) v += ((l - n) % 2 ? -binom[n] : binom[n]) * level_kernel(lv[a], x + n * h[j]);
        g(i, a) = v;
      }
    const double amp = (on[j] ? std::ldexp(1.0, l) : 1.0) * 2.0 * std::sqrt(2.0 / std::numbers::pi);
    const double far = 2.0 * std::pow(amp, q) * std::pow(out.T - l * std::abs(h[j]), 1.0 - q) / (q - 1.0);
    for (int a = 0; a < L; ++a) {
      double acc = 0.0;
      for (long i = 0; i < nodes; ++i) acc += power_abs(g(i, a), q);
      inside[j].push_back(acc * dx);
      outside[j].push_back(far);
    }
    G.push_back(std::move(g));
  }
  std::vector<const Mat*> ptrs;
  for (const auto& g : G) ptrs.push_back(&g);
  const double bulk = contract_sum(ptrs, coeff_tensor(f, ax, false), q, parallel) * std::pow(dx, d);

  double cert = 0.0;
  for (const auto& [s, c] : f.coeffs()) {
    double mass = 0.0;
    for (int j = 0; j < d; ++j) {
      double m = outside[j][ax.slot(j, s[j])];
      for (int i = 0; i < d; ++i)
        if (i != j) m *= inside[i][ax.slot(i, s[i])] + outside[i][ax.slot(i, s[i])];
      mass += m;
    }
    cert += std::abs(c) * std::pow(mass, 1.0 / q);
  }
  out.value = out.lower = std::pow(bulk, 1.0 / q);
  out.upper = out.value + cert;
  return out;
}

TensorIntegral tensor_power_integral(const BlockFunction& f, double q, const TensorQuadratureOptions& opts) {
  require_exponent(q);
  return orthant_integral(f, q, q, false, opts);
}

TensorIntegral tensor_square_function_integral(const BlockFunction& f, double p, const TensorQuadratureOptions& opts) {
  require_exponent(p);
  return orthant_integral(f, 0.5 * p, p, true, opts);
}

TensorNorm tensor_lq_norm(const BlockFunction& f, double q, const TensorQuadratureOptions& opts) {
  require_exponent(q);
  return auto_norm(f, q, q, false, opts);
}

TensorNorm tensor_square_function_norm(const BlockFunction& f, double p, const TensorQuadratureOptions& opts) {
  require_exponent(p);
  return auto_norm(f, 0.5 * p, p, true, opts);
}

}  // namespace hypercross
