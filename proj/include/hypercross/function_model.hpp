#pragma once

#include <span>
#include <vector>

#include "hypercross/block_function.hpp"
#include "hypercross/kernels.hpp"
#include "hypercross/lattice.hpp"
#include "hypercross/majorant.hpp"

namespace hypercross {

/// delta*_s f: the single block c_s * block_kernel(s, .) (empty when s is not in the support).
BlockFunction delta_s(const BlockFunction& f, const DyadicIndex& s);

/// Pointwise evaluator of the mixed difference of order l with steps h along the axes in e.
/// Each block factorizes, so one evaluation costs (l+1) |e| kernel calls per block.
class MixedDifference {
 public:
  MixedDifference(BlockFunction f, int l, std::vector<double> h, std::vector<int> e);
  double operator()(std::span<const double> x) const;

  const BlockFunction& function() const noexcept { return f_; }
  int order() const noexcept { return l_; }
  const std::vector<double>& step() const noexcept { return h_; }
  const std::vector<int>& axes() const noexcept { return e_; }

 private:
  BlockFunction f_;
  int l_;
  std::vector<double> h_;  // one entry per axis, zero off e
  std::vector<int> e_;     // ascending, 0-based
  std::vector<double> binom_;
};

MixedDifference mixed_difference(const BlockFunction& f, int l, std::span<const double> h, std::span<const int> e);

/// 2 int_{band(level)} (2 sin(lambda h / 2))^{2l} dlambda, the squared L_2 norm of the order-l
/// difference of one level kernel with step h.
double band_difference_energy(int level, int l, double h);

/// ||Delta^l_h f||_q. q = 2 is exact on the frequency side (value = lower = upper); other q use
/// tensor quadrature on [-grid.T, grid.T]^d with an outside-the-box bound in upper.
NormEstimate difference_norm(const BlockFunction& f, int l, std::span<const double> h, std::span<const int> e,
                             double q, const QuadratureGrid& grid = {});

/// Nested step grid: all m 2^{k-depth} with 2^depth <= m < 2^{depth+1}, between h_min and h_max.
/// Grids for smaller h_max are prefixes of grids for larger ones.
std::vector<double> nested_step_grid(int depth, double h_min, double h_max);

struct ModulusOptions {
  int h_depth = 4;               // nested grid points per octave: 2^h_depth
  double h_min = 0x1p-40;
  QuadratureGrid grid{};
};

/// Grid sup of ||Delta^l_h f||_q over 0 < h_j <= t_j (j in e) on the nested step grid; a lower
/// approximation of the mixed modulus. t has one entry per axis of e.
double mixed_modulus(const BlockFunction& f, int l, std::span<const double> t, double q, std::span<const int> e,
                     const ModulusOptions& opts = {});

struct DefinitionBudgets {
  int t_depth = 6;      // 2^t_depth midpoint nodes per axis in u = 1 - log2 t
  int h_depth = 4;      // nested step grid density
  double u_max = 24.0;  // t ranges over [2^{1-u_max}, 2]
  double max_cost = 2e9;  // kernel-evaluation budget
  QuadratureGrid grid{};
};

struct DefinitionNorm {
  double value = 0.0;
  double lp_norm = 0.0;
  std::vector<std::vector<int>> subsets;  // nonempty e, in increasing bitmask order
  std::vector<double> subset_terms;
  double cost = 0.0;
};

/// ||f||_p + sum_e (int_{(0,2]^e} (Omega_l(f,t^e)_p / Omega(bar t^e))^theta prod dt_j/t_j)^{1/theta}
/// on the dyadic substitution grid (grid sup for theta = inf). Throws PartialResultError carrying
/// the completed part when the budget is exhausted, DomainError for majorants known only at
/// dyadic points.
DefinitionNorm definition_norm_report(const BlockFunction& f, const Majorant& omega, const SmoothnessParams& params,
                                      const DefinitionBudgets& budgets = {});
double definition_norm(const BlockFunction& f, const Majorant& omega, const SmoothnessParams& params,
                       const DefinitionBudgets& budgets = {});

/// (sum_s (|c_s| ||block_kernel(s)||_p / Omega(2^{-s}))^theta)^{1/theta}, sup for theta = inf.
double decomposition_norm(const BlockFunction& f, const Majorant& omega, const SmoothnessParams& params,
                          const QuadratureGrid& grid = {});

/// A witness rescaled to unit decomposition norm; normalization is the applied factor.
struct Witness {
  BlockFunction f;
  double normalization = 1.0;
  DyadicIndex s_tilde;  // f2 only
};

/// f1: Omega(2^{-s}) 2^{-|s|_1 (1-1/p)} on every s in Theta(N).
Witness make_f1(const Majorant& omega, const SmoothnessParams& params, double N, const QuadratureGrid& grid = {});
/// f2: the single block s_tilde in Theta(N) with the same coefficient law.
Witness make_f2(const Majorant& omega, const SmoothnessParams& params, double N, const DyadicIndex& s_tilde,
                const QuadratureGrid& grid = {});
/// f2 with s_tilde the lexicographically first element of Theta(N).
Witness make_f2(const Majorant& omega, const SmoothnessParams& params, double N, const QuadratureGrid& grid = {});
/// f3: |Theta(N)|^{-1/theta} times f1's coefficients; needs theta < inf.
Witness make_f3(const Majorant& omega, const SmoothnessParams& params, double N, const QuadratureGrid& grid = {});

}  // namespace hypercross
