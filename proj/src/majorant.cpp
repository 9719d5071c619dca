#include "hypercross/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypercross/error.hpp"

namespace hypercross {

namespace {

constexpr double kRelSlack = 1e-12;

double log_plus(double tau) { return std::max(1.0, std::log2(tau)); }

// Exact dyadic exponent k with t == 2^{-k}, k >= 0; throws otherwise.
int dyadic_exponent(double t) {
  int e = 0;
  const double m = std::frexp(t, &e);
  if (m != 0.5 || e > 1) {
    std::ostringstream os;
    os << "custom majorant evaluated at non-dyadic coordinate " << t;
    throw DomainError(os.str());
  }
  return 1 - e;
}

}  // namespace

Majorant Majorant::power_log(int l, std::vector<double> r, std::vector<double> b) {
  if (l < 1) throw ConfigurationError("majorant order l must be a positive integer");
  if (r.empty()) throw ConfigurationError("majorant needs at least one exponent");
  if (b.empty()) b.assign(r.size(), 0.0);
  if (b.size() != r.size()) throw ConfigurationError("majorant exponent vectors r and b differ in length");
  for (double rj : r)
    if (!(rj > 0.0 && rj < static_cast<double>(l)))
      throw ConfigurationError("power_log majorant requires 0 < r_j < l");
  for (double bj : b)
    if (!std::isfinite(bj)) throw ConfigurationError("power_log majorant requires finite b_j");
  Majorant m;
  m.d_ = static_cast<int>(r.size());
  m.l_ = l;
  m.kind_ = MajorantKind::power_log;
  m.r_ = std::move(r);
  m.b_ = std::move(b);
  return m;
}

Majorant Majorant::power(int l, std::vector<double> r) {
  std::vector<double> b(r.size(), 0.0);
  return power_log(l, std::move(r), std::move(b));
}

Majorant Majorant::custom(int d, int l, DyadicValues values) {
  if (d < 1) throw ConfigurationError("majorant dimension must be positive");
  if (l < 1) throw ConfigurationError("majorant order l must be a positive integer");
  if (!values) throw ConfigurationError("custom majorant needs a value map");
  Majorant m;
  m.d_ = d;
  m.l_ = l;
  m.kind_ = MajorantKind::custom_dyadic;
  m.custom_ = std::move(values);
  return m;
}

Majorant Majorant::table(int d, int l, std::map<DyadicIndex, double> values) {
  for (const auto& [s, v] : values) {
    if (s.dim() != d) throw ConfigurationError("majorant table entry has wrong dimension");
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigurationError("majorant table values must be positive");
  }
  auto shared = std::make_shared<const std::map<DyadicIndex, double>>(std::move(values));
  Majorant m = custom(d, l, [shared](const DyadicIndex& s) {
    auto it = shared->find(s);
    if (it == shared->end()) throw DomainError("majorant table has no value at s=" + s.str());
    return it->second;
  });
  m.table_ = std::move(shared);
  return m;
}

double Majorant::evaluate(std::span<const double> t) const {
  if (static_cast<int>(t.size()) != d_) throw DomainError("majorant evaluated at a point of wrong dimension");
  for (double tj : t)
    if (!(tj >= 0.0 && tj <= 2.0)) throw DomainError("majorant argument outside [0,2]^d");
  for (double tj : t)
    if (tj == 0.0) return 0.0;
  if (kind_ == MajorantKind::custom_dyadic) {
    std::vector<int> s(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) s[j] = dyadic_exponent(t[j]);
    return at_dyadic(DyadicIndex(std::move(s)));
  }
  double value = 1.0;
  for (std::size_t j = 0; j < t.size(); ++j)
    value *= std::pow(t[j], r_[j]) / std::pow(log_plus(1.0 / t[j]), b_[j]);
  return value;
}

double Majorant::log2_at_dyadic(const DyadicIndex& s) const {
  if (s.dim() != d_) throw DomainError("dyadic index of wrong dimension for majorant");
  if (kind_ == MajorantKind::custom_dyadic) return std::log2(at_dyadic(s));
  double acc = 0.0;
  for (int j = 0; j < d_; ++j) {
    const double sj = static_cast<double>(s[static_cast<std::size_t>(j)]);
    acc -= r_[static_cast<std::size_t>(j)] * sj;
    if (b_[static_cast<std::size_t>(j)] != 0.0) acc -= b_[static_cast<std::size_t>(j)] * std::log2(std::max(1.0, sj));
  }
  return acc;
}

double Majorant::at_dyadic(const DyadicIndex& s) const {
  if (s.dim() != d_) throw DomainError("dyadic index of wrong dimension for majorant");
  if (kind_ == MajorantKind::power_log) return std::exp2(log2_at_dyadic(s));
  const double v = custom_(s);
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("custom majorant must be positive at s=" + s.str());
  return v;
}

void SmoothnessParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigurationError(what); };
  if (!(p > 1.0)) fail("require p > 1");
  if (!(q > p)) fail("require p < q");
  if (!std::isfinite(q)) fail("require q < infinity");
  if (!(theta >= 1.0)) fail("require theta >= 1");
  if (l < 1) fail("require l >= 1");
  if (d < 1) fail("require d >= 1");
  const double b = beta();
  if (!(b > 0.0 && b < 1.0)) fail("require 0 < beta = 1/p - 1/q < 1");
  if (!(alpha > b)) fail("require alpha > beta = 1/p - 1/q");
}

PsiReport check_psi_l(const Majorant& omega, int grid_depth) {
  if (grid_depth < 1) throw ConfigurationError("grid_depth must be positive");
  const int d = omega.dim();
  const int l = omega.order();
  PsiReport report;
  report.grid_depth = grid_depth;
  const std::vector<int> upper(static_cast<std::size_t>(d), grid_depth);

  // Condition 1: positivity off the coordinate hyperplanes, zero on them.
  for_each_in_box(upper, [&](std::span<const int> s) {
    if (!report.positivity.pass) return;
    DyadicIndex idx(std::vector<int>(s.begin(), s.end()));
    double v = 0.0;
    try {
      v = omega.at_dyadic(idx);
    } catch (const DomainError&) {
      v = 0.0;
    }
    if (!(v > 0.0)) {
      report.positivity = {false, "Omega(2^-s) <= 0 at s=" + idx.str()};
      return;
    }
    if (omega.kind() == MajorantKind::power_log) {
      for (int j = 0; j < d; ++j) {
        std::vector<double> t(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) t[static_cast<std::size_t>(i)] = std::ldexp(1.0, -s[static_cast<std::size_t>(i)]);
        t[static_cast<std::size_t>(j)] = 0.0;
        if (omega.evaluate(t) != 0.0) {
          report.positivity = {false, "Omega nonzero with t_j = 0 next to s=" + idx.str()};
          return;
        }
      }
    }
  });

  // Condition 2: Omega(2^{-s}) nonincreasing in every coordinate of s.
  for_each_in_box(upper, [&](std::span<const int> s) {
    if (!report.monotone.pass || !report.positivity.pass) return;
    DyadicIndex idx(std::vector<int>(s.begin(), s.end()));
    const double v = omega.at_dyadic(idx);
    for (int j = 0; j < d; ++j) {
      if (s[static_cast<std::size_t>(j)] >= grid_depth) continue;
      std::vector<int> next(s.begin(), s.end());
      ++next[static_cast<std::size_t>(j)];
      DyadicIndex nidx(std::move(next));
      if (omega.at_dyadic(nidx) > v * (1.0 + kRelSlack)) {
        report.monotone = {false, "Omega(2^-s) increases from s=" + idx.str() + " to s=" + nidx.str()};
        return;
      }
    }
  });

  // Condition 3: Omega(m t) <= (prod m)^l Omega(t) for m_j in {1,2,4}, staying on the grid.
  const std::vector<int> m_upper(static_cast<std::size_t>(d), 2);  // log2 m_j in {0,1,2}
  for_each_in_box(upper, [&](std::span<const int> s) {
    if (!report.dilation.pass || !report.positivity.pass) return;
    DyadicIndex idx(std::vector<int>(s.begin(), s.end()));
    const double v = omega.at_dyadic(idx);
    for_each_in_box(m_upper, [&](std::span<const int> k) {
      if (!report.dilation.pass) return;
      std::vector<int> shifted(s.begin(), s.end());
      int log2_prod = 0;
      for (int j = 0; j < d; ++j) {
        shifted[static_cast<std::size_t>(j)] -= k[static_cast<std::size_t>(j)];
        log2_prod += k[static_cast<std::size_t>(j)];
        if (shifted[static_cast<std::size_t>(j)] < 0) return;
      }
      DyadicIndex sidx(std::move(shifted));
      const double bound = std::ldexp(v, l * log2_prod);
      if (omega.at_dyadic(sidx) > bound * (1.0 + kRelSlack)) {
        std::ostringstream os;
        os << "Omega(m t) > (prod m)^l Omega(t) at s=" << idx.str() << " with log2 m=(";
        for (int j = 0; j < d; ++j) os << (j ? "," : "") << k[static_cast<std::size_t>(j)];
        os << ")";
        report.dilation = {false, os.str()};
      }
    });
  });
  return report;
}

namespace {

// Extreme of psi(k1) - psi(k2) over k1 >= k2 along every axis line of the box [0,depth]^d,
// psi(k) = log2 Omega(..., 2^{-k}, ...) + slope * k. For want_max the maximum is taken
// (almost-increase constant), otherwise the minimum (almost-decrease constant).
double line_extreme_log2(const Majorant& omega, double slope, int depth, bool want_max) {
  const int d = omega.dim();
  double extreme = 0.0;  // the pair k1 == k2 always contributes 0
  const std::vector<int> upper_others(static_cast<std::size_t>(std::max(d - 1, 1)), d > 1 ? depth : 0);
  for (int j = 0; j < d; ++j) {
    for_each_in_box(upper_others, [&](std::span<const int> others) {
      std::vector<int> s(static_cast<std::size_t>(d), 0);
      for (int i = 0, o = 0; i < d; ++i)
        if (i != j) s[static_cast<std::size_t>(i)] = others[static_cast<std::size_t>(o++)];
      double running = 0.0;
      for (int k = 0; k <= depth; ++k) {
        s[static_cast<std::size_t>(j)] = k;
        const double psi = omega.log2_at_dyadic(DyadicIndex(s)) + slope * k;
        if (k == 0) {
          running = psi;
          continue;
        }
        if (want_max) {
          running = std::min(running, psi);
          extreme = std::max(extreme, psi - running);
        } else {
          running = std::max(running, psi);
          extreme = std::min(extreme, psi - running);
        }
      }
    });
  }
  return extreme;
}

bool stabilized(double full_log2, double sub_log2) { return std::abs(full_log2 - sub_log2) <= 1e-9; }

}  // namespace

double bari_stechkin_c1(const Majorant& omega, double alpha, int grid_depth) {
  return std::exp2(line_extreme_log2(omega, alpha, grid_depth, true));
}

BariStechkinReport check_bari_stechkin(const Majorant& omega, double alpha, int l, int grid_depth) {
  if (!(alpha > 0.0)) throw ConfigurationError("Bari-Stechkin check requires alpha > 0");
  if (l < 1) throw ConfigurationError("Bari-Stechkin check requires l >= 1");
  if (grid_depth < 1) throw ConfigurationError("grid_depth must be positive");
  BariStechkinReport rep;
  rep.alpha = alpha;
  rep.l = l;
  rep.grid_depth = grid_depth;
  const int sub_depth = (3 * grid_depth) / 4;

  // tau = 2^{-k}: phi(tau)/tau^alpha = 2^{log2 phi + alpha k}; tau1 <= tau2 <=> k1 >= k2.
  const double c1_full = line_extreme_log2(omega, alpha, grid_depth, true);
  const double c1_sub = line_extreme_log2(omega, alpha, sub_depth, true);
  rep.c1 = std::exp2(c1_full);
  rep.s_alpha_pass = std::isfinite(rep.c1) && stabilized(c1_full, c1_sub);

  const double ld = static_cast<double>(l);
  rep.gamma_grid = {ld / 8.0, ld / 4.0, ld / 2.0, 3.0 * ld / 4.0};
  for (double gamma : rep.gamma_grid) {
    const double c2_full = line_extreme_log2(omega, ld - gamma, grid_depth, false);
    const double c2_sub = line_extreme_log2(omega, ld - gamma, sub_depth, false);
    const double c2 = std::exp2(c2_full);
    if (c2 > 0.0 && stabilized(c2_full, c2_sub) && (!rep.s_l_pass || c2 > rep.c2)) {
      rep.s_l_pass = true;
      rep.gamma = gamma;
      rep.c2 = c2;
    }
  }
  return rep;
}

}  // namespace hypercross
