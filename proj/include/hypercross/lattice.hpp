#pragma once

#include <span>
#include <vector>

#include "hypercross/dyadic_index.hpp"
#include "hypercross/majorant.hpp"

namespace hypercross {

/// The level function s -> Omega(2^{-s}) 2^{|s|_1 beta} whose level sets cut out the
/// step hyperbolic crosses. beta = 0 gives the plain majorant.
class LevelWeight {
 public:
  LevelWeight(Majorant omega, double beta);

  const Majorant& majorant() const noexcept { return omega_; }
  double beta() const noexcept { return beta_; }
  int dim() const noexcept { return omega_.dim(); }

  double log2(std::span<const int> s) const;
  double log2(const DyadicIndex& s) const { return log2(s.coords()); }
  double operator()(const DyadicIndex& s) const;

 private:
  Majorant omega_;
  double beta_;
};

/// Omega(2^{-s}) 2^{|s|_1 (1/p - 1/q)}.
double weight(const Majorant& omega, const SmoothnessParams& params, const DyadicIndex& s);

struct EnumerationOptions {
  // Ties weight(s) == 1/N are decided in the log2 domain: |log2 weight(s) + log2 N| <= guard
  // counts as equality (the index belongs to kappa(N)) and is flagged.
  double guard_log2 = 1e-12;
  bool parallel = true;
  int c1_grid_depth = 24;  // depth of the (S^alpha) scan certifying the enumeration box
  int max_box = 4096;
};

/// kappa(N), its complement and the layer Theta(N) for one parameter set.
struct LevelSetFamily {
  double N = 1.0;
  std::vector<DyadicIndex> kappa;  // weight >= 1/N, lexicographic
  std::vector<DyadicIndex> theta;  // 1/(2^l N) <= weight < 1/N, lexicographic
  std::vector<int> s_max;          // per-axis enumeration bound used for kappa(2^l N)
  std::vector<DyadicIndex> flagged;  // indices within the tie guard band of 1/N or 1/(2^l N)
};

/// Enumerates the level sets by a scan of a certified box. For s_j larger than the per-axis
/// bound S_j the estimate weight(s) <= C1^d weight(S_j e_j) < 1/N holds, C1 being the grid
/// (S^alpha) constant; alpha > beta makes the axis weights decay geometrically.
class LevelSetEnumerator {
 public:
  LevelSetEnumerator(Majorant omega, double beta, int l, double alpha, EnumerationOptions opts = {});
  LevelSetEnumerator(const Majorant& omega, const SmoothnessParams& params, EnumerationOptions opts = {});

  const LevelWeight& level_weight() const noexcept { return weight_; }
  int order() const noexcept { return l_; }
  double c1() const noexcept { return c1_; }

  bool in_kappa(std::span<const int> s, double N) const;
  bool in_kappa(const DyadicIndex& s, double N) const { return in_kappa(s.coords(), N); }
  /// True when weight(s) lies inside the tie guard band around 1/N.
  bool near_threshold(std::span<const int> s, double N) const;

  std::vector<int> box_bounds(double N) const;
  std::vector<DyadicIndex> kappa(double N) const;
  std::vector<DyadicIndex> theta(double N) const;
  LevelSetFamily family(double N) const;

 private:
  LevelWeight weight_;
  int l_;
  double alpha_;
  EnumerationOptions opts_;
  double c1_ = 1.0;
};

std::vector<DyadicIndex> enumerate_kappa(const Majorant& omega, const SmoothnessParams& params, double N);
std::vector<DyadicIndex> enumerate_theta(const Majorant& omega, const SmoothnessParams& params, double N);

struct CardinalityFit {
  double slope = 0.0;     // least-squares slope of ln|Theta(N)| against ln log2 N
  double residual = 0.0;  // RMS residual of that fit
  double ratio_min = 0.0;  // min over N of |Theta(N)| / (log2 N)^{d-1}
  double ratio_max = 0.0;
  std::vector<double> N;
  std::vector<std::size_t> counts;
};

CardinalityFit cardinality_fit(const LevelSetEnumerator& sets, std::span<const double> N_list);
CardinalityFit cardinality_fit(const Majorant& omega, const SmoothnessParams& params, std::span<const double> N_list);

struct TailSum {
  double tail = 0.0;       // sum over kappa-perp(N) of weight^mu
  double theta_sum = 0.0;  // sum over Theta(N) of weight^mu
  double ratio = 0.0;      // tail / theta_sum
  int shells = 0;          // Theta-shells summed
};

/// Sum of weight^mu over the infinite set kappa-perp(N), taken shell by shell
/// (Theta(N), Theta(2^l N), ...) in ascending order until a nonempty shell adds less than
/// rel_tol of the running total.
TailSum tail_sum(const LevelSetEnumerator& sets, double N, double mu, double rel_tol = 1e-8, int max_shells = 64);
TailSum tail_sum(const Majorant& omega, const SmoothnessParams& params, double N, double mu, double rel_tol = 1e-8);

}  // namespace hypercross
