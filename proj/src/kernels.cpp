#include "hypercross/kernels.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hypercross/error.hpp"

namespace hypercross {

namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void require_level(int level) {
  if (level < 0 || level > 1000) throw DomainError("dyadic level out of range: " + std::to_string(level));
}

int default_ppu(int max_level) { return 8 * (1 << std::min(max_level, 26)); }

}  // namespace

double dirichlet_kernel_1d(int k, double x) {
  if (k < 0) throw DomainError("Dirichlet kernel index must be nonnegative");
  if (x == 0.0) return kSqrt2OverPi;
  return kSqrt2OverPi * 2.0 * std::sin(0.5 * x) * std::cos((k + 0.5) * x) / x;
}

double level_kernel(int level, double x) {
  require_level(level);
  if (level == 0) return x == 0.0 ? kSqrt2OverPi : kSqrt2OverPi * std::sin(x) / x;
  // sin(2a x) - sin(a x) = 2 cos(3a x / 2) sin(a x / 2) with a = 2^{s-1}
  const double a = std::ldexp(1.0, level - 1);
  if (x == 0.0) return kSqrt2OverPi * a;
  return kSqrt2OverPi * 2.0 * std::cos(1.5 * a * x) * std::sin(0.5 * a * x) / x;
}

double level_kernel_numerator(int level, double x) {
  require_level(level);
  if (level == 0) return kSqrt2OverPi * std::sin(x);
  const double a = std::ldexp(1.0, level - 1);
  return kSqrt2OverPi * 2.0 * std::cos(1.5 * a * x) * std::sin(0.5 * a * x);
}

double level_period(int level) {
  require_level(level);
  return level == 0 ? 2.0 * std::numbers::pi : std::ldexp(2.0 * std::numbers::pi, -(level - 1));
}

double band_measure(int level) {
  require_level(level);
  return level == 0 ? 2.0 : std::ldexp(1.0, level);
}

std::vector<std::vector<int>> rho_plus(const DyadicIndex& s) {
  const int d = s.dim();
  std::vector<int> lo(static_cast<std::size_t>(d)), span(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    if (s[j] > 24) throw DomainError("rho_plus would enumerate more than 2^23 integers per axis");
    lo[j] = s[j] == 0 ? 0 : 1 << (s[j] - 1);
    span[j] = (s[j] == 0 ? 1 : 1 << (s[j] - 1)) - 1;
  }
  std::vector<std::vector<int>> out;
  for_each_in_box(span, [&](std::span<const int> off) {
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) k[j] = lo[j] + off[j];
    out.push_back(std::move(k));
  });
  return out;
}

double block_kernel(const DyadicIndex& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.dim()) throw DomainError("block kernel point of wrong dimension");
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v *= level_kernel(s[j], x[j]);
  return v;
}

NormEstimate level_lp_norm(int level, double p, const QuadratureGrid& grid, bool parallel) {
  require_level(level);
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("L_p norm of a block kernel needs 1 < p < inf");
  if (!(grid.rel_tol > 0.0)) throw ConfigurationError("rel_tol must be positive");
  const int ppu = grid.points_per_unit > 0 ? grid.points_per_unit : default_ppu(level);
  if (static_cast<double>(ppu) < 4.0 * std::ldexp(1.0, level)) {
    std::ostringstream os;
    os << "points_per_unit=" << ppu << " cannot resolve level " << level << " (need >= " << 4.0 * std::ldexp(1.0, level)
       << ")";
    throw ResolutionError(os.str());
  }
  const double tau = level_period(level);
  const long n = static_cast<long>(std::ceil(tau * ppu));
  auto f = [level, p](double x) { return std::pow(std::abs(level_kernel(level, x)), p); };
  auto env = [level, p](double x) { return std::pow(std::abs(level_kernel_numerator(level, x)), p); };

  auto bracket = [&](const HalfLineIntegral& h) {
    NormEstimate e;
    e.lower = std::pow(2.0 * h.lower(), 1.0 / p);
    e.upper = std::pow(2.0 * h.upper(), 1.0 / p);
    e.value = std::pow(2.0 * h.mid(), 1.0 / p);
    e.T = h.T();
    e.points_per_unit = ppu;
    return e;
  };

  if (grid.T > 0.0) {
    const long K = std::max(1L, static_cast<long>(std::floor(grid.T / tau)));
    NormEstimate e = bracket(integrate_periodic_tail(f, env, tau, p, n, K, parallel));
    if (e.width() > grid.rel_tol * e.value) {
      std::ostringstream os;
      os << "tail bracket of level " << level << " at T=" << e.T << " has relative width " << e.width() / e.value
         << " > rel_tol=" << grid.rel_tol;
      throw AccuracyError(os.str(), e.value, e.width());
    }
    return e;
  }
  for (long K = 8; K <= (1L << 24); K *= 2) {
    NormEstimate e = bracket(integrate_periodic_tail(f, env, tau, p, n, K, parallel));
    if (e.width() <= grid.rel_tol * e.value) return e;
  }
  throw AccuracyError("automatic truncation radius exceeded 2^24 periods", 0.0, 0.0);
}

NormEstimate block_kernel_lp_norm(const DyadicIndex& s, double p, const QuadratureGrid& grid) {
  QuadratureGrid g = grid;
  if (g.points_per_unit <= 0) g.points_per_unit = default_ppu(s.max_coord());
  // per-factor tolerance rel_tol / d
  if (s.dim() > 0) g.rel_tol = grid.rel_tol / s.dim();
  std::map<int, NormEstimate> cache;
  NormEstimate out{1.0, 1.0, 1.0, 0.0, g.points_per_unit};
  for (int j = 0; j < s.dim(); ++j) {
    auto it = cache.find(s[j]);
    if (it == cache.end()) it = cache.emplace(s[j], level_lp_norm(s[j], p, g)).first;
    out.value *= it->second.value;
    out.lower *= it->second.lower;
    out.upper *= it->second.upper;
    out.T = std::max(out.T, it->second.T);
  }
  return out;
}

LevelNorms::LevelNorms(double p, const QuadratureGrid& grid) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("L_p norm of a block kernel needs 1 < p < inf");
  if (p == 2.0) {
    for (int lv = 0; lv < 2; ++lv) {
      const double v = std::sqrt(band_measure(lv));
      base_[lv] = NormEstimate{v, v, v, 0.0, 0};
    }
    return;
  }
  QuadratureGrid g = grid;
  g.points_per_unit = grid.points_per_unit > 0 ? grid.points_per_unit : default_ppu(1);
  base_[0] = level_lp_norm(0, p, g);
  base_[1] = level_lp_norm(1, p, g);
}

double LevelNorms::level(int s) const {
  if (s < 0) throw DomainError("negative dyadic level");
  if (s == 0) return base_[0].value;
  return base_[1].value * std::exp2((s - 1) * (1.0 - 1.0 / p_));
}

double LevelNorms::block(const DyadicIndex& s) const {
  double v = 1.0;
  for (int j = 0; j < s.dim(); ++j) v *= level(s[j]);
  return v;
}

}  // namespace hypercross
