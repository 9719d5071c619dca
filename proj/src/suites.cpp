#include "hypercross/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "hypercross/approximation.hpp"
#include "hypercross/error.hpp"
#include "hypercross/function_model.hpp"
#include "hypercross/lattice.hpp"
#include "hypercross/norms.hpp"

namespace hypercross {

namespace {

SuiteCheck at_most(std::string name, double value, double bound, std::string detail = {}) {
  return SuiteCheck{std::move(name), value <= bound, value, bound, std::move(detail)};
}

struct Spread {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  double ratio() const { return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity(); }
  std::string str() const {
    std::ostringstream os;
    os << "[" << lo << ", " << hi << "]";
    return os.str();
  }
};

std::string p_tag(double p) {
  std::ostringstream os;
  os << "p=" << p;
  return os.str();
}

void suite_dk(SuiteReport& r, std::uint64_t seed, const QuadratureGrid& grid) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (const DyadicIndex& s : {DyadicIndex{0, 0}, DyadicIndex{1, 2}, DyadicIndex{3, 1}, DyadicIndex{2, 3}}) {
    const auto freqs = rho_plus(s);
    for (int i = 0; i < 16; ++i) {
      const double x[2] = {20.0 * uniform_pm1(rng()), 20.0 * uniform_pm1(rng())};
      double sum = 0.0;
      for (const auto& k : freqs) sum += dirichlet_kernel_1d(k[0], x[0]) * dirichlet_kernel_1d(k[1], x[1]);
      worst = std::max(worst, std::abs(block_kernel(s, x) - sum) / static_cast<double>(freqs.size()));
    }
  }
  r.checks.push_back(at_most("block kernel equals the Dirichlet sum over rho+", worst, 1e-12));

  double parseval = 0.0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b + a <= 6; ++b) {
      const DyadicIndex s{a, b};
      const double exact = std::sqrt(band_measure(a) * band_measure(b));
      parseval = std::max(parseval, std::abs(block_kernel_lp_norm(s, 2.0, grid).value / exact - 1.0));
    }
  r.checks.push_back(at_most("p=2 block norms match Parseval", parseval, 1e-3));

  QuadratureGrid fine = grid;
  fine.points_per_unit = 3 * 8 * 16;
  const NormEstimate direct = level_lp_norm(4, 1.5, fine);
  const double dilated = level_norms(1.5, grid).level(4);
  r.checks.push_back(at_most("dilation law at level 4, p=1.5", std::abs(direct.value / dilated - 1.0), 1e-3));

  for (double p : {1.5, 2.0, 4.0}) {
    const LevelNorms& norms = level_norms(p, grid);
    Spread spread;
    for (int d = 1; d <= 2; ++d)
      for (int a = 0; a <= 10; ++a)
        for (int b = 0; b <= (d == 2 ? 10 - a : 0); ++b) {
          const DyadicIndex s = d == 1 ? DyadicIndex{a} : DyadicIndex{a, b};
          spread.add(norms.block(s) / std::exp2(s.norm1() * (1.0 - 1.0 / p)));
        }
    r.checks.push_back(at_most("block norm order, " + p_tag(p), spread.ratio(), 4.0, spread.str()));
  }
}

void suite_lp(SuiteReport& r, std::uint64_t seed, const QuadratureGrid& grid) {
  for (int d = 1; d <= 2; ++d) {
    const auto corpus = random_corpus(d, d == 1 ? 8 : 5, 10, seed);
    const CorpusRange two = littlewood_paley_corpus(corpus, 2.0, grid);
    double dev = 0.0;
    for (double x : two.ratios) dev = std::max(dev, std::abs(x - 1.0));
    r.checks.push_back(at_most("p=2 ratio equals 1, d=" + std::to_string(d), dev, 1e-3));
    const CorpusRange four = littlewood_paley_corpus(corpus, 4.0, grid);
    std::ostringstream os;
    os << "[" << four.lower << ", " << four.upper << "]";
    r.checks.push_back(at_most("p=4 ratios inside [1/K, K], d=" + std::to_string(d), four.K, 10.0, os.str()));
  }
}

// Lemma A is the beta = 0 case of Lemma B.
void suite_tail(SuiteReport& r, double beta) {
  const double r1 = 0.6;
  {
    const LevelSetEnumerator sets(Majorant::power(1, {r1}), beta, 1, r1 - 1.0 / 16);
    const double a = r1 - beta;
    const double mu = 2.0;
    const double start = std::floor(1.0 / a) + 1.0;
    const double closed = std::exp2(-a * mu * start) / (1.0 - std::exp2(-a * mu));
    const TailSum t = tail_sum(sets, 2.0, mu);
    r.checks.push_back(at_most("d=1 geometric tail, N=2, mu=2", std::abs(t.tail / closed - 1.0), 1e-8));
  }
  const LevelSetEnumerator sets(Majorant::power(1, {r1, r1}), beta, 1, r1 - 1.0 / 16);
  for (double mu : {1.0, 2.0, 4.0}) {
    Spread ratio, scaled;
    for (int k = 2; k <= 12; ++k) {
      const double N = std::ldexp(1.0, k);
      const TailSum t = tail_sum(sets, N, mu);
      ratio.add(t.ratio);
      scaled.add(t.tail * std::pow(N, mu) / k);
    }
    const std::string tag = "mu=" + std::to_string(static_cast<int>(mu));
    r.checks.push_back(at_most("tail over Theta sum stays in one bracket, " + tag, ratio.ratio(), 4.0, ratio.str()));
    r.checks.push_back(
        at_most("tail N^mu / log2 N stays in one bracket, " + tag, scaled.ratio(), 4.0, scaled.str()));
  }
}

void suite_thmA(SuiteReport& r, std::uint64_t seed, const QuadratureGrid& grid) {
  Spread all;
  for (int d = 1; d <= 2; ++d) {
    const Majorant omega = Majorant::power(1, std::vector<double>(static_cast<std::size_t>(d), 0.6));
    for (double theta : {2.0, std::numeric_limits<double>::infinity()}) {
      SmoothnessParams P;
      P.p = 2.0;
      P.q = 4.0;
      P.theta = theta;
      P.l = 1;
      P.alpha = 0.6 - 1.0 / 16;
      P.d = d;
      DefinitionBudgets budgets;
      budgets.grid = grid;
      for (const auto& f : random_corpus(d, d == 1 ? 6 : 4, 3, seed + 10 * d))
        all.add(definition_norm(f, omega, P, budgets) / decomposition_norm(f, omega, P, grid));
    }
  }
  const double K = std::max(all.hi, 1.0 / all.lo);
  r.checks.push_back(at_most("definition / decomposition norm inside [1/K, K]", K, 10.0, all.str()));
}

void suite_thm1(SuiteReport& r, std::uint64_t seed, const QuadratureGrid& grid) {
  RateConfig cfg;
  cfg.omega = Majorant::power(1, {0.6, 0.6});
  cfg.params.p = 2.0;
  cfg.params.q = 4.0;
  cfg.params.l = 1;
  cfg.params.alpha = 0.6 - 1.0 / 16;
  cfg.params.d = 2;
  cfg.N_exponents = {4, 5, 6, 7, 8};
  cfg.seed = seed;
  cfg.grid = grid;
  cfg.witness = WitnessKind::f1;
  const RateTable f1 = rate_experiment(cfg);
  Spread lower;
  for (const auto& row : f1.rows)
    if (row.ok) lower.add(normalized_ratio(row.e_lower, row.N, cfg.params));
  r.checks.push_back(SuiteCheck{"f1 lower ratio positive", f1.failures == 0 && lower.lo > 0.0, lower.lo, 0.0,
                                lower.str()});
  r.checks.push_back(at_most("f1 lower ratio bracket", lower.ratio(), 8.0));

  cfg.witness = WitnessKind::random;
  Spread upper, vs_lemma;
  int failures = 0;
  for (std::uint64_t m = 0; m < 3; ++m) {
    cfg.seed = seed + m;
    const RateTable t = rate_experiment(cfg);
    failures += t.failures;
    for (const auto& row : t.rows)
      if (row.ok) {
        upper.add(row.norm_ratio);
        vs_lemma.add(row.error / row.lemmaV_upper);
      }
  }
  r.checks.push_back(
      SuiteCheck{"random members computed", failures == 0, static_cast<double>(failures), 0.0, {}});
  r.checks.push_back(at_most("random member upper ratio", upper.hi, 4.0, upper.str()));
  r.checks.push_back(at_most("random member error over lemma V bound", vs_lemma.hi, 4.0, vs_lemma.str()));
}

}  // namespace

bool SuiteReport::pass() const noexcept {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dk", "lp", "lemmaA", "lemmaB", "thmA", "thm1"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, const QuadratureGrid& grid) {
  SuiteReport r;
  r.suite = name;
  if (name == "dk") suite_dk(r, seed, grid);
  else if (name == "lp") suite_lp(r, seed, grid);
  else if (name == "lemmaA") suite_tail(r, 0.0);
  else if (name == "lemmaB") suite_tail(r, 0.25);
  else if (name == "thmA") suite_thmA(r, seed, grid);
  else if (name == "thm1") suite_thm1(r, seed, grid);
  else throw ConfigurationError("unknown suite '" + name + "' (expected dk, lp, lemmaA, lemmaB, thmA or thm1)");
  return r;
}

}  // namespace hypercross
