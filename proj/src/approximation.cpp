#include "hypercross/approximation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "hypercross/error.hpp"
#include "hypercross/kernels.hpp"

namespace hypercross {

BlockFunction partial_sum(const BlockFunction& f, std::span<const DyadicIndex> L) {
  const std::set<DyadicIndex> keep(L.begin(), L.end());
  BlockFunction out(f.dim());
  for (const auto& [s, c] : f.coeffs())
    if (keep.contains(s)) out.set(s, c);
  return out;
}

BlockFunction residual(const BlockFunction& f, const LevelSetEnumerator& sets, double N) {
  BlockFunction out(f.dim());
  for (const auto& [s, c] : f.coeffs())
    if (!sets.in_kappa(s, N)) out.set(s, c);
  return out;
}

ApproxError approx_error(const BlockFunction& f, const LevelSetEnumerator& sets, double N, double q,
                         const QuadratureGrid& grid, double c_lp) {
  if (!(c_lp >= 1.0)) throw ConfigurationError("the bracket constant c_lp must be >= 1");
  const LqNorm n = lq_norm(residual(f, sets, N), q, grid);
  return ApproxError{n.value, n.width(), n.value / c_lp, n.value, n.engine};
}

double lemmaV_upper(const BlockFunction& f, const LevelSetEnumerator& sets, double N, double p, double q,
                    const QuadratureGrid& grid) {
  if (!(p > 1.0 && q > p && std::isfinite(q))) throw ConfigurationError("lemmaV_upper needs 1 < p < q < inf");
  const LevelNorms& norms = level_norms(p, grid);
  const double beta = 1.0 / p - 1.0 / q;
  double acc = 0.0;
  for (const auto& [s, c] : f.coeffs()) {
    if (sets.in_kappa(s, N)) continue;
    acc += std::pow(std::abs(c) * norms.block(s) * std::exp2(s.norm1() * beta), q);
  }
  return std::pow(acc, 1.0 / q);
}

double cell_integral(int level, double q) {
  if (level < 0) throw DomainError("negative dyadic level");
  if (!(q > 0.0)) throw DomainError("cell integral needs q > 0");
  using boost::math::quadrature::gauss;
  if (level == 0) return gauss<double, 20>::integrate([q](double x) { return std::pow(std::abs(level_kernel(0, x)), q); }, 0.5, 1.0);
  // block_kernel(s, x) = 2^{s-1} block_kernel(1, 2^{s-1} x) maps every cell onto [1/4, 1/2)
  const double base =
      gauss<double, 20>::integrate([q](double y) { return std::pow(std::abs(level_kernel(1, y)), q); }, 0.25, 0.5);
  return std::exp2((level - 1) * (q - 1.0)) * base;
}

double cell_lower_bound(const BlockFunction& f, std::span<const DyadicIndex> cells, double q) {
  double acc = 0.0;
  for (const auto& s : cells) {
    const double c = f.coeff(s);
    if (c == 0.0) continue;
    double m = std::pow(std::abs(c), q);
    for (int j = 0; j < s.dim(); ++j) m *= cell_integral(s[j], q);
    acc += m;
  }
  return std::pow(acc, 1.0 / q);
}

double cell_lower_bound(const BlockFunction& f, const LevelSetEnumerator& sets, double N, double q) {
  const auto theta = sets.theta(N);
  return cell_lower_bound(f, theta, q);
}

double littlewood_paley_ratio(const BlockFunction& f, double p, const QuadratureGrid& grid) {
  const LqNorm n = lq_norm(f, p, grid);
  if (!(n.value > 0.0)) throw DegenerateDataError("Littlewood-Paley ratio of a zero function");
  if (f.size() == 1) return 1.0;
  return square_function_norm(f, p, grid).value / n.value;
}

CorpusRange littlewood_paley_corpus(std::span<const BlockFunction> corpus, double p, const QuadratureGrid& grid) {
  CorpusRange r;
  if (corpus.empty()) throw DegenerateDataError("empty Littlewood-Paley corpus");
  for (const auto& f : corpus) r.ratios.push_back(littlewood_paley_ratio(f, p, grid));
  r.lower = *std::min_element(r.ratios.begin(), r.ratios.end());
  r.upper = *std::max_element(r.ratios.begin(), r.ratios.end());
  r.K = std::max(r.upper, 1.0 / r.lower);
  return r;
}

double uniform_pm1(std::uint64_t bits) noexcept {
  return 2.0 * std::ldexp(static_cast<double>(bits >> 11), -53) - 1.0;
}

std::uint64_t row_seed(std::uint64_t seed, double N) noexcept {
  // splitmix64 finalizer over the seed and the bit pattern of N
  std::uint64_t z = seed ^ (std::bit_cast<std::uint64_t>(N) * 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BlockFunction random_block_function(int d, int max_norm1, std::uint64_t seed) {
  if (d < 1 || max_norm1 < 0) throw ConfigurationError("random block function needs d >= 1 and max_norm1 >= 0");
  std::mt19937_64 rng(seed);
  const std::vector<int> upper(static_cast<std::size_t>(d), max_norm1);
  BlockFunction f(d);
  const int wanted = max_norm1 == 0 ? 1 : 2;
  while (static_cast<int>(f.size()) < wanted) {
    for_each_in_box(upper, [&](std::span<const int> s) {
      int n = 0;
      for (int v : s) n += v;
      if (n > max_norm1) return;
      const bool take = (rng() >> 63) != 0;
      const double c = uniform_pm1(rng());
      if (take && c != 0.0) f.set(DyadicIndex(std::vector<int>(s.begin(), s.end())), c);
    });
  }
  return f;
}

std::vector<BlockFunction> random_corpus(int d, int max_norm1, int count, std::uint64_t seed) {
  std::vector<BlockFunction> out;
  for (int i = 0; i < count; ++i) out.push_back(random_block_function(d, max_norm1, row_seed(seed, i)));
  return out;
}

double lp_bracket_constant(double q, int d, std::uint64_t seed, const QuadratureGrid& grid) {
  if (q == 2.0) return 1.0;
  // tensor quadrature is limited to small levels; the exact engines take the full corpus
  const int depth = q == 4.0 ? 5 : 3;
  const auto corpus = random_corpus(d, depth, 20, seed);
  const CorpusRange r = littlewood_paley_corpus(corpus, q, grid);
  return r.upper / r.lower;
}

Witness random_class_member(const Majorant& omega, const SmoothnessParams& params, double N, std::uint64_t seed,
                            int depth, const QuadratureGrid& grid) {
  const LevelSetEnumerator sets(omega, params);
  if (depth < 0) {
    const auto outer = sets.theta(std::ldexp(N, params.l));
    if (outer.empty()) throw DomainError("Theta(2^l N) is empty; pass an explicit depth");
    for (const auto& s : outer) depth = std::max(depth, s.norm1());
  }
  std::mt19937_64 rng(row_seed(seed, N));
  const std::vector<int> upper(static_cast<std::size_t>(params.d), depth);
  BlockFunction f(params.d);
  for_each_in_box(upper, [&](std::span<const int> coords) {
    int n = 0;
    for (int v : coords) n += v;
    if (n > depth) return;
    const DyadicIndex s(std::vector<int>(coords.begin(), coords.end()));
    const double u = uniform_pm1(rng());
    f.set(s, u * omega.at_dyadic(s) * std::exp2(-n * (1.0 - 1.0 / params.p)));
  });
  const double norm = decomposition_norm(f, omega, params, grid);
  if (!(norm > 0.0)) throw DegenerateDataError("random class member has zero decomposition norm");
  return Witness{f.scaled(1.0 / norm), 1.0 / norm, {}};
}

WitnessKind parse_witness(const std::string& name) {
  if (name == "f1") return WitnessKind::f1;
  if (name == "f2") return WitnessKind::f2;
  if (name == "f3") return WitnessKind::f3;
  if (name == "random") return WitnessKind::random;
  throw ConfigurationError("unknown witness '" + name + "' (expected f1, f2, f3 or random)");
}

const char* to_string(WitnessKind w) noexcept {
  switch (w) {
    case WitnessKind::f1: return "f1";
    case WitnessKind::f2: return "f2";
    case WitnessKind::f3: return "f3";
    case WitnessKind::random: return "random";
  }
  return "?";
}

double rate_log_exponent(const SmoothnessParams& params) {
  const double inv_theta = params.theta_infinite() ? 0.0 : 1.0 / params.theta;
  return (params.d - 1) * std::max(0.0, 1.0 / params.q - inv_theta);
}

double normalized_ratio(double error, double N, const SmoothnessParams& params) {
  return error * N / std::pow(std::log2(N), rate_log_exponent(params));
}

RateTable rate_experiment(const RateConfig& config) {
  const SmoothnessParams& P = config.params;
  P.validate();
  if (config.omega.dim() != P.d) throw ConfigurationError("omega dimension differs from d");
  if (config.omega.order() != P.l) throw ConfigurationError("omega order differs from l");
  if (config.N_exponents.empty()) throw ConfigurationError("empty N sweep");
  for (std::size_t i = 0; i < config.N_exponents.size(); ++i) {
    const int k = config.N_exponents[i];
    if (k < 2 || k > 40) throw ConfigurationError("N exponents must lie in [2, 40]");
    if (i > 0 && k <= config.N_exponents[i - 1]) throw ConfigurationError("N exponents must increase strictly");
  }
  if (config.witness == WitnessKind::f3 && P.theta_infinite()) throw ConfigurationError("f3 needs theta < inf");

  const LevelSetEnumerator sets(config.omega, P);
  RateTable table;
  table.log_exponent = rate_log_exponent(P);
  table.c_lp = lp_bracket_constant(P.q, P.d, config.seed, config.grid);

  for (int k : config.N_exponents) {
    RateRow row;
    row.N = std::ldexp(1.0, k);
    try {
      Witness w;
      switch (config.witness) {
        case WitnessKind::f1: w = make_f1(config.omega, P, row.N, config.grid); break;
        case WitnessKind::f2: w = make_f2(config.omega, P, row.N, config.grid); break;
        case WitnessKind::f3: w = make_f3(config.omega, P, row.N, config.grid); break;
        case WitnessKind::random:
          w = random_class_member(config.omega, P, row.N, config.seed, config.depth, config.grid);
          break;
      }
      const ApproxError e = approx_error(w.f, sets, row.N, P.q, config.grid, table.c_lp);
      row.error = e.value;
      row.cert_width = e.width;
      row.e_lower = e.e_lower;
      row.norm_ratio = normalized_ratio(e.value, row.N, P);
      row.lemmaV_upper = lemmaV_upper(w.f, sets, row.N, P.p, P.q, config.grid);
      row.normalization = w.normalization;
      row.blocks = w.f.size();
    } catch (const Error& err) {
      row.ok = false;
      row.failure = std::string(err.kind()) + ": " + err.what();
      ++table.failures;
    }
    table.rows.push_back(std::move(row));
  }

  std::vector<double> xs, ys;
  bool first = true;
  for (const auto& r : table.rows) {
    if (!r.ok) continue;
    if (first) {
      table.ratio_min = table.ratio_max = r.norm_ratio;
      first = false;
    }
    table.ratio_min = std::min(table.ratio_min, r.norm_ratio);
    table.ratio_max = std::max(table.ratio_max, r.norm_ratio);
    if (r.error > 0.0) {
      xs.push_back(std::log(r.N));
      ys.push_back(std::log(r.error));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    table.slope = sxy / sxx;
  }
  return table;
}

}  // namespace hypercross
