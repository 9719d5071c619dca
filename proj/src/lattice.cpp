#include "hypercross/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hypercross/box_scan.hpp"
#include "hypercross/error.hpp"

namespace hypercross {

LevelWeight::LevelWeight(Majorant omega, double beta) : omega_(std::move(omega)), beta_(beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigurationError("level weight needs beta >= 0");
}

double LevelWeight::log2(std::span<const int> s) const {
  if (static_cast<int>(s.size()) != omega_.dim()) throw DomainError("dyadic index of wrong dimension");
  double norm1 = 0.0;
  for (int v : s) norm1 += v;
  if (omega_.kind() == MajorantKind::power_log) {
    const auto& r = omega_.r();
    const auto& b = omega_.b();
    double acc = beta_ * norm1;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double sj = s[j];
      acc -= r[j] * sj;
      if (b[j] != 0.0) acc -= b[j] * std::log2(std::max(1.0, sj));
    }
    return acc;
  }
  return omega_.log2_at_dyadic(DyadicIndex(std::vector<int>(s.begin(), s.end()))) + beta_ * norm1;
}

double LevelWeight::operator()(const DyadicIndex& s) const { return std::exp2(log2(s)); }

double weight(const Majorant& omega, const SmoothnessParams& params, const DyadicIndex& s) {
  return LevelWeight(omega, params.beta())(s);
}

namespace {

void require_threshold(double N) {
  if (!(N >= 1.0) || !std::isfinite(N)) throw ConfigurationError("threshold N must be a finite number >= 1");
}

}  // namespace

LevelSetEnumerator::LevelSetEnumerator(Majorant omega, double beta, int l, double alpha, EnumerationOptions opts)
    : weight_(std::move(omega), beta), l_(l), alpha_(alpha), opts_(opts) {
  if (l_ < 1) throw ConfigurationError("modulus order l must be >= 1");
  if (!(alpha_ > beta)) {
    std::ostringstream os;
    os << "level sets may be infinite: need alpha > beta (alpha=" << alpha_ << ", beta=" << beta << ")";
    throw ConfigurationError(os.str());
  }
  c1_ = bari_stechkin_c1(weight_.majorant(), alpha_, opts_.c1_grid_depth);
}

LevelSetEnumerator::LevelSetEnumerator(const Majorant& omega, const SmoothnessParams& params, EnumerationOptions opts)
    : LevelSetEnumerator(omega, params.beta(), params.l, params.alpha, opts) {
  if (omega.dim() != params.d) throw ConfigurationError("majorant dimension differs from params.d");
}

bool LevelSetEnumerator::in_kappa(std::span<const int> s, double N) const {
  return weight_.log2(s) + std::log2(N) >= -opts_.guard_log2;
}

bool LevelSetEnumerator::near_threshold(std::span<const int> s, double N) const {
  return std::abs(weight_.log2(s) + std::log2(N)) <= opts_.guard_log2;
}

std::vector<int> LevelSetEnumerator::box_bounds(double N) const {
  require_threshold(N);
  const int d = weight_.dim();
  const double slack = d * std::log2(c1_);
  const double cut = -std::log2(N) - opts_.guard_log2;
  std::vector<int> bounds(static_cast<std::size_t>(d), -1);
  for (int j = 0; j < d; ++j) {
    std::vector<int> s(static_cast<std::size_t>(d), 0);
    for (int k = 0; k <= opts_.max_box; ++k) {
      s[static_cast<std::size_t>(j)] = k;
      if (weight_.log2(s) + slack < cut) {
        bounds[static_cast<std::size_t>(j)] = k;
        break;
      }
    }
    if (bounds[static_cast<std::size_t>(j)] < 0)
      throw ConfigurationError("enumeration box exceeds max_box along axis " + std::to_string(j));
  }
  return bounds;
}

std::vector<DyadicIndex> LevelSetEnumerator::kappa(double N) const {
  const auto upper = box_bounds(N);
  auto keep = [&](std::span<const int> s) { return in_kappa(s, N); };
  return opts_.parallel ? box_scan_parallel(upper, keep) : box_scan_serial(upper, keep);
}

std::vector<DyadicIndex> LevelSetEnumerator::theta(double N) const {
  const double outer = std::ldexp(N, l_);
  const auto upper = box_bounds(outer);
  auto keep = [&](std::span<const int> s) { return in_kappa(s, outer) && !in_kappa(s, N); };
  return opts_.parallel ? box_scan_parallel(upper, keep) : box_scan_serial(upper, keep);
}

LevelSetFamily LevelSetEnumerator::family(double N) const {
  LevelSetFamily fam;
  fam.N = N;
  fam.kappa = kappa(N);
  fam.theta = theta(N);
  const double outer = std::ldexp(N, l_);
  fam.s_max = box_bounds(outer);
  auto near = [&](std::span<const int> s) { return near_threshold(s, N) || near_threshold(s, outer); };
  fam.flagged = opts_.parallel ? box_scan_parallel(fam.s_max, near) : box_scan_serial(fam.s_max, near);
  return fam;
}

std::vector<DyadicIndex> enumerate_kappa(const Majorant& omega, const SmoothnessParams& params, double N) {
  return LevelSetEnumerator(omega, params).kappa(N);
}

std::vector<DyadicIndex> enumerate_theta(const Majorant& omega, const SmoothnessParams& params, double N) {
  return LevelSetEnumerator(omega, params).theta(N);
}

CardinalityFit cardinality_fit(const LevelSetEnumerator& sets, std::span<const double> N_list) {
  if (N_list.size() < 4) throw ConfigurationError("cardinality fit needs at least 4 thresholds");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (!(N_list[i] >= 4.0)) throw ConfigurationError("cardinality fit thresholds must be >= 4");
    if (i > 0 && !(N_list[i] > N_list[i - 1])) throw ConfigurationError("cardinality fit thresholds must increase");
  }
  const int d = sets.level_weight().dim();
  CardinalityFit fit;
  std::vector<double> xs, ys;
  for (double N : N_list) {
    const std::size_t count = sets.theta(N).size();
    if (count == 0) {
      std::ostringstream os;
      os << "Theta(N) is empty at N=" << N;
      throw DegenerateDataError(os.str());
    }
    const double lg = std::log2(N);
    const double ratio = static_cast<double>(count) / std::pow(lg, d - 1);
    if (fit.counts.empty()) {
      fit.ratio_min = fit.ratio_max = ratio;
    } else {
      fit.ratio_min = std::min(fit.ratio_min, ratio);
      fit.ratio_max = std::max(fit.ratio_max, ratio);
    }
    fit.N.push_back(N);
    fit.counts.push_back(count);
    xs.push_back(std::log(lg));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

CardinalityFit cardinality_fit(const Majorant& omega, const SmoothnessParams& params, std::span<const double> N_list) {
  return cardinality_fit(LevelSetEnumerator(omega, params), N_list);
}

TailSum tail_sum(const LevelSetEnumerator& sets, double N, double mu, double rel_tol, int max_shells) {
  require_threshold(N);
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigurationError("tail sum exponent mu must be positive and finite");
  const auto& w = sets.level_weight();
  TailSum out;
  double shell_N = N;
  for (int shell = 1; shell <= max_shells; ++shell) {
    double contribution = 0.0;
    const auto layer = sets.theta(shell_N);
    for (const auto& s : layer) contribution += std::exp2(mu * w.log2(s));
    out.tail += contribution;
    if (shell == 1) out.theta_sum = contribution;
    out.shells = shell;
    if (!layer.empty() && contribution < rel_tol * out.tail) {
      out.ratio = out.theta_sum > 0.0 ? out.tail / out.theta_sum : std::numeric_limits<double>::infinity();
      return out;
    }
    shell_N = std::ldexp(shell_N, sets.order());
  }
  std::ostringstream os;
  os << "tail sum over kappa-perp(" << N << ") did not converge within " << max_shells << " shells";
  throw ConvergenceError(os.str());
}

TailSum tail_sum(const Majorant& omega, const SmoothnessParams& params, double N, double mu, double rel_tol) {
  return tail_sum(LevelSetEnumerator(omega, params), N, mu, rel_tol);
}

}  // namespace hypercross
