#include "hypercross/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>

#include "hypercross/error.hpp"
#include "hypercross/parallel.hpp"

namespace hypercross {

namespace {

struct Interval {
  double lo, hi;
};

int band_intervals(int level, std::array<Interval, 2>& out) {
  if (level == 0) {
    out[0] = {-1.0, 1.0};
    return 1;
  }
  const double hi = std::ldexp(1.0, level), lo = std::ldexp(1.0, level - 1);
  out[0] = {-hi, -lo};
  out[1] = {lo, hi};
  return 2;
}

// (chi_a * chi_b)(x) = sum over interval pairs of |I cap (x - J)|.
struct BandConvolution {
  std::array<Interval, 2> I{}, J{};
  int ni = 0, nj = 0;

  BandConvolution(int a, int b) {
    ni = band_intervals(a, I);
    nj = band_intervals(b, J);
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (int i = 0; i < ni; ++i)
      for (int j = 0; j < nj; ++j) {
        const double lo = std::max(I[i].lo, x - J[j].hi);
        const double hi = std::min(I[i].hi, x - J[j].lo);
        if (hi > lo) acc += hi - lo;
      }
    return acc;
  }

  void breakpoints(std::vector<double>& out) const {
    for (int i = 0; i < ni; ++i)
      for (int j = 0; j < nj; ++j) {
        out.push_back(I[i].lo + J[j].lo);
        out.push_back(I[i].lo + J[j].hi);
        out.push_back(I[i].hi + J[j].lo);
        out.push_back(I[i].hi + J[j].hi);
      }
  }
};

void require_moment_level(int level) {
  if (level < 0 || level > kMomentMaxLevel)
    throw ConfigurationError("moment engine supports levels 0.." + std::to_string(kMomentMaxLevel) + ", got " +
                             std::to_string(level));
}

}  // namespace

double moment4(int a, int b, int c, int e) {
  for (int v : {a, b, c, e}) require_moment_level(v);
  const BandConvolution F(a, b), G(c, e);
  std::vector<double> xs{0.0};
  F.breakpoints(xs);
  G.breakpoints(xs);
  std::erase_if(xs, [](double x) { return x < 0.0; });
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  // both factors are even; integrate over [0, inf) and double
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i], x1 = xs[i + 1], xm = 0.5 * (x0 + x1);
    acc += (x1 - x0) / 6.0 * (F(x0) * G(x0) + 4.0 * F(xm) * G(xm) + F(x1) * G(x1));
  }
  return 2.0 * acc / (2.0 * std::numbers::pi);
}

MomentTable::MomentTable(int max_level, bool parallel) : n_(max_level + 1) {
  require_moment_level(max_level);
  const std::size_t n = static_cast<std::size_t>(n_);
  v_.assign(n * n * n * n, 0.0);
  auto at = [&](int a, int b, int c, int e) -> double& { return v_[((a * n + b) * n + c) * n + e]; };
  // canonical representatives a <= b, c <= e, (a,b) <= (c,e); the other orderings are copies
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int a = 0; a < n_; ++a)
    for (int b = a; b < n_; ++b)
      for (int c = a; c < n_; ++c)
        for (int e = c; e < n_; ++e) {
          if (c == a && e < b) continue;
          const double m = moment4(a, b, c, e);
          for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}})
            for (auto [z, w] : {std::pair{c, e}, std::pair{e, c}}) {
              at(x, y, z, w) = m;
              at(z, w, x, y) = m;
            }
        }
}

std::shared_ptr<const MomentTable> shared_moment_table(int max_level) {
  require_moment_level(max_level);
  static std::mutex mu;
  static std::shared_ptr<const MomentTable> table;
  std::lock_guard lock(mu);
  if (!table || table->max_level() < max_level) {
    const int target = std::min(kMomentMaxLevel, ((max_level + 8) / 8) * 8);
    table = std::make_shared<const MomentTable>(target);
  }
  return table;
}

namespace {

using Mat = Eigen::MatrixXd;

struct Blocks {
  std::vector<const int*> s;
  std::vector<double> c;
};

Blocks flatten(const BlockFunction& f) {
  Blocks b;
  for (const auto& [s, c] : f.coeffs()) {
    b.s.push_back(s.coords().data());
    b.c.push_back(c);
  }
  return b;
}

double brute_force(const BlockFunction& f, const MomentTable& M, bool parallel) {
  const Blocks b = flatten(f);
  const int n = static_cast<int>(b.c.size()), d = f.dim();
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int i = 0; i < n; ++i) {
    double acc_i = 0.0;
    for (int k = 0; k < n; ++k) {
      double acc_k = 0.0;
      for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w) {
          double m = b.c[u] * b.c[w];
          for (int j = 0; j < d; ++j) m *= M(b.s[i][j], b.s[k][j], b.s[u][j], b.s[w][j]);
          acc_k += m;
        }
      acc_i += b.c[k] * acc_k;
    }
    partial[i] = b.c[i] * acc_i;
  }
  return ordered_sum(partial);
}

// Axis moment matrix over ordered level pairs (i,k) -> i + k*L (column-major pair index).
Mat pair_moments(const std::vector<int>& lv, const MomentTable& M) {
  const int L = static_cast<int>(lv.size());
  Mat out(L * L, L * L);
  for (int i = 0; i < L; ++i)
    for (int k = 0; k < L; ++k)
      for (int u = 0; u < L; ++u)
        for (int w = 0; w < L; ++w) out(i + k * L, u + w * L) = M(lv[i], lv[k], lv[u], lv[w]);
  return out;
}

double contract_1d(const BlockFunction& f, const MomentTable& M) {
  const AxisLevels ax = axis_levels(f);
  const int L = static_cast<int>(ax.levels[0].size());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(L);
  for (const auto& [s, v] : f.coeffs()) c(ax.slot(0, s[0])) = v;
  Mat cc = c * c.transpose();
  Eigen::Map<Eigen::VectorXd> w(cc.data(), L * L);
  return w.dot(pair_moments(ax.levels[0], M) * w);
}

// With W[(a,b),(i,k)] = C(a,i) C(b,k) = (C kron C), the integral is
//   sum_{P,Q} W[P1,P2] W[Q1,Q2] M0[P1,Q1] M1[P2,Q2] = sum(M0 o (W M1 W^T)),
// and W applied to a vector over axis-1 pairs is X -> C X C^T.
double contract_2d(const BlockFunction& f, const MomentTable& M, bool parallel) {
  const AxisLevels ax = axis_levels(f);
  const int L0 = static_cast<int>(ax.levels[0].size()), L1 = static_cast<int>(ax.levels[1].size());
  Mat C = Mat::Zero(L0, L1);
  for (const auto& [s, v] : f.coeffs()) C(ax.slot(0, s[0]), ax.slot(1, s[1])) = v;
  const Mat M0 = pair_moments(ax.levels[0], M);
  const Mat M1 = pair_moments(ax.levels[1], M);
  const Mat Ct = C.transpose();

  Mat A(L0 * L0, L1 * L1);  // W M1
#pragma omp parallel for schedule(static) if (parallel)
  for (int q = 0; q < L1 * L1; ++q) {
    Eigen::Map<const Mat> X(M1.col(q).data(), L1, L1);
    Mat Y = C * X * Ct;
    A.col(q) = Eigen::Map<const Eigen::VectorXd>(Y.data(), L0 * L0);
  }
  const Mat At = A.transpose();
  std::vector<double> partial(static_cast<std::size_t>(L0 * L0), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int p = 0; p < L0 * L0; ++p) {
    Eigen::Map<const Mat> R(At.col(p).data(), L1, L1);
    Mat Z = C * R * Ct;  // column p of (W M1 W^T)^T
    partial[p] = M0.col(p).dot(Eigen::Map<const Eigen::VectorXd>(Z.data(), L0 * L0));
  }
  return ordered_sum(partial);
}

}  // namespace

double l4_power(const BlockFunction& f, bool parallel) {
  if (f.empty()) return 0.0;
  const auto M = shared_moment_table(f.max_level());
  if (f.dim() == 1) return contract_1d(f, *M);
  if (f.dim() == 2) return contract_2d(f, *M, parallel);
  return brute_force(f, *M, parallel);
}

double l4_power_reference(const BlockFunction& f) {
  if (f.empty()) return 0.0;
  return brute_force(f, *shared_moment_table(f.max_level()), false);
}

double square_function_l4_power(const BlockFunction& f, bool parallel) {
  if (f.empty()) return 0.0;
  const auto M = shared_moment_table(f.max_level());
  const Blocks b = flatten(f);
  const int n = static_cast<int>(b.c.size()), d = f.dim();
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double m = b.c[k] * b.c[k];
      for (int j = 0; j < d; ++j) m *= (*M)(b.s[i][j], b.s[i][j], b.s[k][j], b.s[k][j]);
      acc += m;
    }
    partial[i] = b.c[i] * b.c[i] * acc;
  }
  return ordered_sum(partial);
}

}  // namespace hypercross
