#include "hypercross/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "hypercross/error.hpp"
#include "hypercross/norms.hpp"
#include "hypercross/tensor_quadrature.hpp"

namespace hypercross {

BlockFunction delta_s(const BlockFunction& f, const DyadicIndex& s) {
  BlockFunction out(f.dim());
  if (s.dim() != f.dim()) throw DomainError("block index of wrong dimension");
  out.set(s, f.coeff(s));
  return out;
}

namespace {

std::vector<double> binomial_row(int n) {
  std::vector<double> row(static_cast<std::size_t>(n + 1), 1.0);
  for (int k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

std::vector<int> checked_axes(std::span<const int> e, int d) {
  std::vector<int> axes(e.begin(), e.end());
  std::sort(axes.begin(), axes.end());
  if (axes.empty()) throw DomainError("axis subset e must be nonempty");
  if (std::adjacent_find(axes.begin(), axes.end()) != axes.end()) throw DomainError("axis subset e has repeats");
  if (axes.front() < 0 || axes.back() >= d) throw DomainError("axis subset e out of range");
  return axes;
}

}  // namespace

MixedDifference::MixedDifference(BlockFunction f, int l, std::vector<double> h, std::vector<int> e)
    : f_(std::move(f)), l_(l), h_(std::move(h)), e_(checked_axes(e, f_.dim())), binom_(binomial_row(l)) {
  if (l < 1) throw DomainError("difference order must be >= 1");
  if (static_cast<int>(h_.size()) != f_.dim()) throw DomainError("difference step must have one entry per axis");
  for (int j = 0; j < f_.dim(); ++j)
    if (!std::binary_search(e_.begin(), e_.end(), j) && h_[j] != 0.0)
      throw DomainError("difference step must vanish off the axis subset");
}

double MixedDifference::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != f_.dim()) throw DomainError("evaluation point has the wrong dimension");
  double acc = 0.0;
  for (const auto& [s, c] : f_.coeffs()) {
    double term = c;
    for (int j = 0; j < f_.dim(); ++j) {
      if (!std::binary_search(e_.begin(), e_.end(), j)) {
        term *= level_kernel(s[j], x[j]);
        continue;
      }
      double v = 0.0;
      for (int n = 0; n <= l_; ++n)
        v += ((l_ - n) % 2 ? -binom_[n] : binom_[n]) * level_kernel(s[j], x[j] + n * h_[j]);
      term *= v;
    }
    acc += term;
  }
  return acc;
}

MixedDifference mixed_difference(const BlockFunction& f, int l, std::span<const double> h, std::span<const int> e) {
  return MixedDifference(f, l, std::vector<double>(h.begin(), h.end()), std::vector<int>(e.begin(), e.end()));
}

double band_difference_energy(int level, int l, double h) {
  if (l < 1) throw DomainError("difference order must be >= 1");
  h = std::abs(h);
  if (h == 0.0) return 0.0;
  const double lo = level == 0 ? 0.0 : std::ldexp(1.0, level - 1);
  const double hi = level == 0 ? 1.0 : std::ldexp(1.0, level);
  if (h * hi <= 4.0) {
    auto g = [h, l](double lam) { return std::pow(2.0 * std::sin(0.5 * lam * h), 2 * l); };
    return 2.0 * boost::math::quadrature::gauss<double, 20>::integrate(g, lo, hi);
  }
  // (2 - 2 cos x)^l = C(2l,l) + 2 sum_k (-1)^k C(2l,l+k) cos(k x)
  const auto b = binomial_row(2 * l);
  double acc = b[l] * (hi - lo);
  for (int k = 1; k <= l; ++k)
    acc += 2.0 * (k % 2 ? -b[l + k] : b[l + k]) * (std::sin(k * h * hi) - std::sin(k * h * lo)) / (k * h);
  return 2.0 * acc;
}

NormEstimate difference_norm(const BlockFunction& f, int l, std::span<const double> h, std::span<const int> e,
                             double q, const QuadratureGrid& grid) {
  const auto axes = checked_axes(e, f.dim());
  if (static_cast<int>(h.size()) != f.dim()) throw DomainError("difference step must have one entry per axis");
  if (q == 2.0) {
    double acc = 0.0;
    for (const auto& [s, c] : f.coeffs()) {
      double m = c * c;
      for (int j = 0; j < f.dim(); ++j)
        m *= std::binary_search(axes.begin(), axes.end(), j) ? band_difference_energy(s[j], l, h[j]) : band_measure(s[j]);
      acc += m;
    }
    const double v = std::sqrt(acc);
    return NormEstimate{v, v, v, 0.0, 0};
  }
  const DifferenceNorm dn = tensor_difference_norm(f, l, h, axes, q, grid.T, grid.points_per_unit);
  return NormEstimate{dn.value, dn.lower, dn.upper, dn.T, dn.points_per_unit};
}

std::vector<double> nested_step_grid(int depth, double h_min, double h_max) {
  if (depth < 0 || depth > 12) throw ConfigurationError("step grid depth must lie in [0, 12]");
  if (!(h_min > 0.0) || !(h_max >= h_min)) throw ConfigurationError("step grid needs 0 < h_min <= h_max");
  std::vector<double> out;
  const int k_lo = std::ilogb(h_min), k_hi = std::ilogb(h_max);
  for (int k = k_lo; k <= k_hi; ++k)
    for (int m = 1 << depth; m < (2 << depth); ++m) {
      const double v = std::ldexp(static_cast<double>(m), k - depth);
      if (v >= h_min && v <= h_max) out.push_back(v);
    }
  return out;
}

namespace {

// Dense table of difference norms over a product of step grids (one per axis of e), stored
// row-major in the order of e, then turned into running maxima along every axis.
struct ModulusTable {
  std::vector<std::vector<double>> steps;
  std::vector<double> v;
  double cost = 0.0;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& s : steps) n *= s.size();
    return n;
  }

  void prefix_max() {
    const std::size_t k = steps.size();
    std::vector<std::size_t> stride(k, 1);
    for (std::size_t j = k; j-- > 1;) stride[j - 1] = stride[j] * steps[j].size();
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t idx = 0; idx < v.size(); ++idx)
        if ((idx / stride[j]) % steps[j].size() > 0) v[idx] = std::max(v[idx], v[idx - stride[j]]);
  }

  /// Running max at the largest grid steps <= t (0 when some axis has no step <= t_j).
  double lookup(std::span<const double> t) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const auto it = std::upper_bound(steps[j].begin(), steps[j].end(), t[j]);
      if (it == steps[j].begin()) return 0.0;
      idx = idx * steps[j].size() + static_cast<std::size_t>(it - steps[j].begin() - 1);
    }
    return v[idx];
  }
};

double table_cost(const BlockFunction& f, const std::vector<std::vector<double>>& steps, double q, int l,
                  const QuadratureGrid& grid) {
  double points = 1.0;
  for (const auto& s : steps) points *= static_cast<double>(s.size());
  const double blocks = std::max<double>(1.0, static_cast<double>(f.size()));
  if (q == 2.0) return points * blocks;
  const double T = grid.T > 0.0 ? grid.T : 32.0;
  const double ppu = grid.points_per_unit > 0 ? grid.points_per_unit : 8.0 * std::ldexp(1.0, f.max_level());
  return points * blocks * (l + 1) * std::pow(2.0 * T * ppu, f.dim());
}

ModulusTable build_table(const BlockFunction& f, int l, const std::vector<int>& axes,
                         std::vector<std::vector<double>> steps, double q, const QuadratureGrid& grid) {
  ModulusTable T;
  T.steps = std::move(steps);
  T.cost = table_cost(f, T.steps, q, l, grid);
  T.v.assign(T.size(), 0.0);
  const int d = f.dim();
  const std::size_t k = axes.size();

  if (q == 2.0 && k <= 2) {
    // squared norms are bilinear in per-axis band energies
    const AxisLevels ax = axis_levels(f);
    std::vector<Eigen::MatrixXd> E;  // per axis of e: levels x steps
    for (std::size_t j = 0; j < k; ++j) {
      const auto& lv = ax.levels[axes[j]];
      Eigen::MatrixXd m(static_cast<Eigen::Index>(lv.size()), static_cast<Eigen::Index>(T.steps[j].size()));
      for (std::size_t a = 0; a < lv.size(); ++a)
        for (std::size_t i = 0; i < T.steps[j].size(); ++i) m(a, i) = band_difference_energy(lv[a], l, T.steps[j][i]);
      E.push_back(std::move(m));
    }
    const Eigen::Index L0 = E[0].rows(), L1 = k == 2 ? E[1].rows() : 1;
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(L0, L1);
    for (const auto& [s, c] : f.coeffs()) {
      double w = c * c;
      for (int j = 0; j < d; ++j)
        if (!std::binary_search(axes.begin(), axes.end(), j)) w *= band_measure(s[j]);
      W(ax.slot(axes[0], s[axes[0]]), k == 2 ? ax.slot(axes[1], s[axes[1]]) : 0) += w;
    }
    if (k == 1) {
      const Eigen::VectorXd V = E[0].transpose() * W.col(0);
      for (Eigen::Index i = 0; i < V.size(); ++i) T.v[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, V(i)));
    } else {
      const Eigen::MatrixXd V = E[0].transpose() * W * E[1];
      const std::size_t n1 = T.steps[1].size();
      for (Eigen::Index i = 0; i < V.rows(); ++i)
        for (Eigen::Index j = 0; j < V.cols(); ++j)
          T.v[static_cast<std::size_t>(i) * n1 + static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, V(i, j)));
    }
  } else {
    std::vector<int> upper(k);
    for (std::size_t j = 0; j < k; ++j) upper[j] = static_cast<int>(T.steps[j].size()) - 1;
    std::size_t idx = 0;
    std::vector<double> h(static_cast<std::size_t>(d), 0.0);
    for_each_in_box(upper, [&](std::span<const int> i) {
      for (std::size_t j = 0; j < k; ++j) h[axes[j]] = T.steps[j][i[j]];
      T.v[idx++] = difference_norm(f, l, h, axes, q, grid).value;
    });
  }
  T.prefix_max();
  return T;
}

}  // namespace

double mixed_modulus(const BlockFunction& f, int l, std::span<const double> t, double q, std::span<const int> e,
                     const ModulusOptions& opts) {
  const auto axes = checked_axes(e, f.dim());
  if (t.size() != axes.size()) throw DomainError("t must have one entry per axis of e");
  if (!(q > 1.0)) throw DomainError("mixed modulus needs q > 1");
  std::vector<std::vector<double>> steps;
  for (double tj : t) {
    if (!(tj > 0.0) || tj > 2.0) throw DomainError("t must lie in (0, 2]");
    if (tj < opts.h_min) return 0.0;
    steps.push_back(nested_step_grid(opts.h_depth, opts.h_min, tj));
  }
  if (f.empty()) return 0.0;
  const ModulusTable T = build_table(f, l, axes, std::move(steps), q, opts.grid);
  return T.v.back();
}

DefinitionNorm definition_norm_report(const BlockFunction& f, const Majorant& omega, const SmoothnessParams& params,
                                      const DefinitionBudgets& budgets) {
  const int d = f.dim();
  if (omega.dim() != d || params.d != d) throw ConfigurationError("dimension mismatch between f, omega and params");
  if (d > 3) throw ConfigurationError("definition norm supports d <= 3");
  if (omega.kind() != MajorantKind::power_log)
    throw DomainError("definition norm evaluates Omega off the dyadic grid; custom majorants are dyadic only");
  if (budgets.t_depth < 0 || budgets.t_depth > 12) throw ConfigurationError("t_depth must lie in [0, 12]");
  const double p = params.p, theta = params.theta;
  DefinitionNorm out;
  if (f.empty()) return out;
  out.lp_norm = lq_norm(f, p, budgets.grid).value;
  out.value = out.lp_norm;

  const int nu = 1 << budgets.t_depth;
  const double du = budgets.u_max / nu;
  std::vector<double> tnodes(static_cast<std::size_t>(nu));
  for (int i = 0; i < nu; ++i) tnodes[i] = std::exp2(1.0 - (i + 0.5) * du);
  const std::vector<double> full = nested_step_grid(budgets.h_depth, 0x1p-40, 2.0);

  for (int mask = 1; mask < (1 << d); ++mask) {
    std::vector<int> axes;
    for (int j = 0; j < d; ++j)
      if ((mask >> j) & 1) axes.push_back(j);
    const std::vector<std::vector<double>> steps(axes.size(), full);
    const double cost = table_cost(f, steps, p, params.l, budgets.grid);
    if (out.cost + cost > budgets.max_cost) {
      std::ostringstream os;
      os << "definition norm budget " << budgets.max_cost << " exhausted before subset " << mask;
      throw PartialResultError(os.str(), out.value);
    }
    const ModulusTable T = build_table(f, params.l, axes, steps, p, budgets.grid);
    out.cost += T.cost;

    std::vector<int> upper(axes.size(), nu - 1);
    std::vector<double> tbar(static_cast<std::size_t>(d), 1.0), te(axes.size());
    double acc = 0.0;
    for_each_in_box(upper, [&](std::span<const int> i) {
      for (std::size_t j = 0; j < axes.size(); ++j) tbar[axes[j]] = te[j] = tnodes[i[j]];
      const double ratio = T.lookup(te) / omega.evaluate(tbar);
      if (params.theta_infinite())
        acc = std::max(acc, ratio);
      else
        acc += std::pow(ratio, theta);
    });
    double term = acc;
    if (!params.theta_infinite()) term = std::pow(acc * std::pow(std::numbers::ln2 * du, axes.size()), 1.0 / theta);
    out.subsets.push_back(axes);
    out.subset_terms.push_back(term);
    out.value += term;
  }
  return out;
}

double definition_norm(const BlockFunction& f, const Majorant& omega, const SmoothnessParams& params,
                       const DefinitionBudgets& budgets) {
  return definition_norm_report(f, omega, params, budgets).value;
}

double decomposition_norm(const BlockFunction& f, const Majorant& omega, const SmoothnessParams& params,
                          const QuadratureGrid& grid) {
  if (omega.dim() != f.dim()) throw ConfigurationError("dimension mismatch between f and omega");
  const LevelNorms& norms = level_norms(params.p, grid);
  double acc = 0.0;
  for (const auto& [s, c] : f.coeffs()) {
    const double r = std::abs(c) * norms.block(s) / omega.at_dyadic(s);
    if (params.theta_infinite())
      acc = std::max(acc, r);
    else
      acc += std::pow(r, params.theta);
  }
  return params.theta_infinite() ? acc : std::pow(acc, 1.0 / params.theta);
}

namespace {

double coefficient_law(const Majorant& omega, const SmoothnessParams& params, const DyadicIndex& s) {
  return omega.at_dyadic(s) * std::exp2(-s.norm1() * (1.0 - 1.0 / params.p));
}

Witness normalized(BlockFunction f, const Majorant& omega, const SmoothnessParams& params,
                   const QuadratureGrid& grid) {
  const double n = decomposition_norm(f, omega, params, grid);
  if (!(n > 0.0)) throw DegenerateDataError("witness has zero decomposition norm");
  Witness w{f.scaled(1.0 / n), 1.0 / n, {}};
  return w;
}

std::vector<DyadicIndex> nonempty_theta(const Majorant& omega, const SmoothnessParams& params, double N) {
  auto theta = LevelSetEnumerator(omega, params).theta(N);
  if (theta.empty()) {
    std::ostringstream os;
    os << "Theta(N) is empty at N=" << N;
    throw DomainError(os.str());
  }
  return theta;
}

}  // namespace

Witness make_f1(const Majorant& omega, const SmoothnessParams& params, double N, const QuadratureGrid& grid) {
  BlockFunction f(params.d);
  for (const auto& s : nonempty_theta(omega, params, N)) f.set(s, coefficient_law(omega, params, s));
  return normalized(std::move(f), omega, params, grid);
}

Witness make_f2(const Majorant& omega, const SmoothnessParams& params, double N, const DyadicIndex& s_tilde,
                const QuadratureGrid& grid) {
  const auto theta = nonempty_theta(omega, params, N);
  if (!std::binary_search(theta.begin(), theta.end(), s_tilde))
    throw DomainError("s_tilde " + s_tilde.str() + " is not in Theta(N)");
  BlockFunction f(params.d);
  f.set(s_tilde, coefficient_law(omega, params, s_tilde));
  Witness w = normalized(std::move(f), omega, params, grid);
  w.s_tilde = s_tilde;
  return w;
}

Witness make_f2(const Majorant& omega, const SmoothnessParams& params, double N, const QuadratureGrid& grid) {
  return make_f2(omega, params, N, nonempty_theta(omega, params, N).front(), grid);
}

Witness make_f3(const Majorant& omega, const SmoothnessParams& params, double N, const QuadratureGrid& grid) {
  if (params.theta_infinite()) throw ConfigurationError("f3 needs theta < inf");
  const auto theta = nonempty_theta(omega, params, N);
  const double scale = std::pow(static_cast<double>(theta.size()), -1.0 / params.theta);
  BlockFunction f(params.d);
  for (const auto& s : theta) f.set(s, scale * coefficient_law(omega, params, s));
  return normalized(std::move(f), omega, params, grid);
}

}  // namespace hypercross
