// Acceptance checks: one PASS/FAIL line per criterion, tolerances pinned below.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hypercross/approximation.hpp"
#include "hypercross/error.hpp"
#include "hypercross/function_model.hpp"
#include "hypercross/kernels.hpp"
#include "hypercross/lattice.hpp"
#include "hypercross/norms.hpp"
#include "hypercross/tensor_quadrature.hpp"

using namespace hypercross;
namespace fs = std::filesystem;

namespace tol {
constexpr double kSlope2 = 0.25;          // d = 2 slope within 1 +- this
constexpr double kSlope3 = 0.35;          // d = 3 slope within 2 +- this
constexpr double kCardinalitySpread = 6;  // max/min |Theta| / (log2 N)^{d-1}
constexpr double kTailSpread = 4;         // max/min of tail ratios and of tail N^mu / log2 N
constexpr double kTailOracle = 1e-7;      // library tail sum (stops at 1e-8 per shell) vs direct sum
constexpr double kOrderSpread = 4;        // max/min ||block||_p / 2^{|s|(1-1/p)}
constexpr double kParseval = 1e-3;        // relative
constexpr double kDilation = 1e-3;        // dilation law vs direct quadrature, relative
constexpr double kEquivalence = 10;       // K for definition/decomposition norms
constexpr double kLowerSpread = 8;        // max/min of lower-bound ratios
constexpr double kF2Low = 0.25, kF2High = 4.0;  // c and C in [c / 2^l, C]
constexpr double kUpper = 4;              // upper normalized ratio
constexpr double kLemmaV = 4;             // error / lemmaV_upper
constexpr double kLpTwo = 1e-3;           // |ratio - 1| at p = 2
constexpr double kLpFour = 10;            // K at p = 4
constexpr double kEngines = 1e-3;         // exact engines vs tensor quadrature, relative
}  // namespace tol

namespace {

int failures = 0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void report(const char* id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > limit_seconds) {
    out.pass = false;
    out.detail += " [over the time limit]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %s %s: %s (%.2fs, limit %.0fs)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), dt,
              limit_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

SmoothnessParams make_params(int d, double p, double q, double theta, double alpha) {
  SmoothnessParams P;
  P.p = p;
  P.q = q;
  P.theta = theta;
  P.l = 1;
  P.alpha = alpha;
  P.d = d;
  return P;
}

Majorant power(int d, double r) { return Majorant::power(1, std::vector<double>(static_cast<std::size_t>(d), r)); }

// Lexicographic odometer over [0, upper_j].
template <class F>
void odometer(const std::vector<int>& upper, F&& visit) {
  std::vector<int> s(upper.size(), 0);
  while (true) {
    visit(s);
    int j = static_cast<int>(s.size()) - 1;
    while (j >= 0 && s[static_cast<std::size_t>(j)] == upper[static_cast<std::size_t>(j)]) s[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) return;
    ++s[static_cast<std::size_t>(j)];
  }
}

// log2 of Omega(2^{-s}) 2^{|s| beta} for the power-log family, written out directly.
double log2_weight(const std::vector<double>& r, const std::vector<double>& b, double beta, const std::vector<int>& s) {
  double v = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    v += (beta - r[j]) * s[j] - b[j] * std::log2(std::max(1.0, static_cast<double>(s[j])));
  return v;
}

Outcome criterion1() {
  const std::vector<double> rs{0.5, 0.6, 0.8};
  const double beta = 0.25;
  long specs = 0, mismatches = 0;
  for (int d = 1; d <= 3; ++d) {
    std::vector<int> choice_upper(static_cast<std::size_t>(2 * d), 0);
    for (int j = 0; j < d; ++j) {
      choice_upper[static_cast<std::size_t>(j)] = 2;
      choice_upper[static_cast<std::size_t>(d + j)] = 1;
    }
    odometer(choice_upper, [&](const std::vector<int>& choice) {
      std::vector<double> r, b;
      for (int j = 0; j < d; ++j) {
        r.push_back(rs[static_cast<std::size_t>(choice[static_cast<std::size_t>(j)])]);
        b.push_back(choice[static_cast<std::size_t>(d + j)]);
      }
      const double r_min = *std::min_element(r.begin(), r.end());
      const auto P = make_params(d, 2.0, 4.0, INFINITY, r_min - 1.0 / 16);
      const LevelSetEnumerator sets(Majorant::power_log(1, r, b), P);
      ++specs;
      // weight <= 2^{(beta - r_j) s_j} bounds every axis for the largest threshold 2^13
      std::vector<int> box;
      for (double rj : r) box.push_back(static_cast<int>(std::floor((13.0 + 1e-9) / (rj - beta))));
      std::vector<std::pair<std::vector<int>, double>> all;
      odometer(box, [&](const std::vector<int>& s) { all.emplace_back(s, log2_weight(r, b, beta, s)); });
      for (int k = 2; k <= 12; ++k) {
        std::vector<DyadicIndex> kappa, theta;
        for (const auto& [s, lw] : all) {
          if (lw + k >= -1e-9) kappa.emplace_back(s);
          else if (lw + k + 1 >= -1e-9) theta.emplace_back(s);
        }
        const double N = std::ldexp(1.0, k);
        if (sets.kappa(N) != kappa || sets.theta(N) != theta) ++mismatches;
      }
    });
  }
  return {mismatches == 0, std::to_string(specs) + " majorants x 11 thresholds, " + std::to_string(mismatches) + " mismatches"};
}

Outcome criterion2() {
  std::vector<double> Ns;
  for (int k = 6; k <= 20; ++k) Ns.push_back(std::ldexp(1.0, k));
  std::string detail;
  bool pass = true;
  for (int d : {2, 3}) {
    const auto fit = cardinality_fit(power(d, 0.6), make_params(d, 2.0, 4.0, INFINITY, 0.6 - 1.0 / 16), Ns);
    const double tol = d == 2 ? tol::kSlope2 : tol::kSlope3;
    const double spread = fit.ratio_max / fit.ratio_min;
    pass = pass && std::abs(fit.slope - (d - 1)) <= tol && spread <= tol::kCardinalitySpread;
    detail += "d=" + std::to_string(d) + " slope " + fmt("%.3f", fit.slope) + " spread " + fmt("%.2f", spread) + "; ";
  }
  return {pass, detail};
}

Outcome criterion3() {
  const auto om = power(2, 0.6);
  const auto P = make_params(2, 2.0, 4.0, INFINITY, 0.6 - 1.0 / 16);
  const LevelSetEnumerator sets(om, P);
  bool pass = true;
  std::string detail;
  double oracle_dev = 0.0;
  for (double mu : {1.0, 2.0, 4.0}) {
    double rlo = INFINITY, rhi = 0.0, clo = INFINITY, chi = 0.0;
    for (int k = 2; k <= 12; ++k) {
      const double N = std::ldexp(1.0, k);
      const TailSum t = tail_sum(sets, N, mu);
      rlo = std::min(rlo, t.ratio);
      rhi = std::max(rhi, t.ratio);
      const double c = t.tail * std::pow(N, mu) / k;
      clo = std::min(clo, c);
      chi = std::max(chi, c);
      // direct sum over a box reaching 2^{-60} below the threshold weight^mu
      if (k % 5 == 2) {
        const int box = static_cast<int>(std::ceil((k + 60.0 / mu) / 0.35)) + 2;
        double direct = 0.0;
        for (int a = 0; a <= box; ++a)
          for (int b = 0; b <= box; ++b) {
            const double lw = -0.35 * (a + b);
            if (lw + k < -1e-9) direct += std::exp2(mu * lw);
          }
        oracle_dev = std::max(oracle_dev, std::abs(t.tail - direct) / direct);
      }
    }
    pass = pass && rhi / rlo <= tol::kTailSpread && chi / clo <= tol::kTailSpread;
    detail += "mu=" + fmt("%g", mu) + " ratio spread " + fmt("%.2f", rhi / rlo) + " C spread " + fmt("%.2f", chi / clo) + "; ";
  }
  pass = pass && oracle_dev <= tol::kTailOracle;
  detail += "direct-sum deviation " + fmt("%.1e", oracle_dev);
  return {pass, detail};
}

Outcome criterion4() {
  bool pass = true;
  std::string detail;
  // direct quadrature on a grid that is not a dilate of the base-level grid
  QuadratureGrid direct;
  direct.points_per_unit = 3 * (1 << 12);
  double parseval_dev = 0.0, dilation_dev = 0.0;
  for (double p : {1.5, 2.0, 4.0}) {
    std::vector<double> level(11);
    for (int k = 0; k <= 10; ++k) {
      level[static_cast<std::size_t>(k)] = level_lp_norm(k, p, direct).value;
      dilation_dev = std::max(dilation_dev, std::abs(level_norms(p).level(k) / level[static_cast<std::size_t>(k)] - 1.0));
    }
    double lo = INFINITY, hi = 0.0;
    for (int a = 0; a <= 10; ++a) {
      const double one = level[static_cast<std::size_t>(a)] / std::exp2(a * (1 - 1 / p));
      lo = std::min(lo, one);
      hi = std::max(hi, one);
      for (int b = 0; a + b <= 10; ++b) {
        const double n = level[static_cast<std::size_t>(a)] * level[static_cast<std::size_t>(b)];
        const double r = n / std::exp2((a + b) * (1 - 1 / p));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        if (p == 2.0) {
          const double exact = std::sqrt(band_measure(a) * band_measure(b));
          parseval_dev = std::max(parseval_dev, std::abs(block_kernel_lp_norm(DyadicIndex{a, b}, 2.0, {}).value / exact - 1));
          parseval_dev = std::max(parseval_dev, std::abs(n / exact - 1));
        }
      }
    }
    pass = pass && hi / lo <= tol::kOrderSpread;
    detail += "p=" + fmt("%g", p) + " spread " + fmt("%.2f", hi / lo) + "; ";
  }
  pass = pass && parseval_dev <= tol::kParseval && dilation_dev <= tol::kDilation;
  detail += "Parseval deviation " + fmt("%.1e", parseval_dev) + ", dilation vs direct " + fmt("%.1e", dilation_dev);
  return {pass, detail};
}

Outcome criterion5() {
  double lo = INFINITY, hi = 0.0;
  int count = 0;
  for (int d : {1, 2}) {
    const auto om = power(d, 0.6);
    for (double theta : {2.0, std::numeric_limits<double>::infinity()}) {
      const auto P = make_params(d, 2.0, 4.0, theta, 0.5);
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const BlockFunction f = random_block_function(d, 5, 1000 * d + seed);
        const double r = definition_norm(f, om, P) / decomposition_norm(f, om, P);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        ++count;
      }
    }
  }
  const double K = std::max(hi, 1.0 / lo);
  return {K <= tol::kEquivalence,
          std::to_string(count) + " functions, ratios in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "], K=" + fmt("%.2f", K)};
}

struct Regime {
  const char* name;
  double p, q, theta;
  WitnessKind lower_witness;
};

const Regime kRegimes[3] = {
    {"a", 2.0, 4.0, INFINITY, WitnessKind::f1},
    {"b", 2.0, 4.0, 2.0, WitnessKind::f2},
    {"c", 4.0 / 3.0, 2.0, 4.0, WitnessKind::f3},
};

RateConfig regime_config(const Regime& g) {
  RateConfig cfg;
  cfg.omega = power(2, 0.6);
  cfg.params = make_params(2, g.p, g.q, g.theta, 0.6 - 1.0 / 16);
  cfg.N_exponents = {4, 5, 6, 7, 8, 9, 10};
  cfg.witness = g.lower_witness;
  cfg.seed = 1;
  return cfg;
}

Outcome criterion6() {
  bool pass = true;
  std::string detail;
  for (const Regime& g : kRegimes) {
    const RateTable t = rate_experiment(regime_config(g));
    const auto P = regime_config(g).params;
    double lo = INFINITY, hi = 0.0, elo = INFINITY, ehi = 0.0;
    for (const auto& row : t.rows) {
      if (!row.ok) {
        pass = false;
        detail += std::string(g.name) + " row failed: " + row.failure + "; ";
        continue;
      }
      // the lower bound concerns the best approximation, so use the lower edge of its bracket
      const double e = normalized_ratio(row.e_lower, row.N, P);
      elo = std::min(elo, e);
      ehi = std::max(ehi, e);
      lo = std::min(lo, row.norm_ratio);
      hi = std::max(hi, row.norm_ratio);
    }
    bool ok = elo > 0.0 && ehi / elo <= tol::kLowerSpread;
    if (g.lower_witness == WitnessKind::f2) ok = ok && lo >= tol::kF2Low / 2.0 && hi <= tol::kF2High;
    pass = pass && ok;
    detail += std::string(g.name) + ": E-lower ratio [" + fmt("%.3f", elo) + ", " + fmt("%.3f", ehi) + "] spread " +
              fmt("%.2f", ehi / elo) + ", error ratio [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]; ";
  }
  return {pass, detail};
}

Outcome criterion7() {
  bool pass = true;
  std::string detail;
  for (const Regime& g : kRegimes) {
    double worst = 0.0, worst_v = 0.0;
    int rows = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      RateConfig cfg = regime_config(g);
      cfg.witness = WitnessKind::random;
      cfg.seed = seed;
      const RateTable t = rate_experiment(cfg);
      for (const auto& row : t.rows) {
        if (!row.ok) {
          pass = false;
          continue;
        }
        ++rows;
        worst = std::max(worst, row.norm_ratio);
        if (row.lemmaV_upper > 0.0) worst_v = std::max(worst_v, row.error / row.lemmaV_upper);
      }
    }
    pass = pass && rows == 140 && worst <= tol::kUpper && worst_v <= tol::kLemmaV;
    detail += std::string(g.name) + ": " + std::to_string(rows) + " rows, max ratio " + fmt("%.3f", worst) +
              ", max error/lemmaV " + fmt("%.3f", worst_v) + "; ";
  }
  return {pass, detail};
}

Outcome criterion8() {
  bool pass = true;
  std::string detail;
  double dev2 = 0.0, K = 1.0, engines = 0.0;
  for (int d : {1, 2}) {
    const auto corpus = random_corpus(d, d == 1 ? 8 : 5, 20, 100 + d);
    for (const auto& r : littlewood_paley_corpus(corpus, 2.0).ratios) dev2 = std::max(dev2, std::abs(r - 1.0));
    const CorpusRange four = littlewood_paley_corpus(corpus, 4.0);
    K = std::max(K, four.K);
    detail += "d=" + std::to_string(d) + " p=4 ratios [" + fmt("%.3f", four.lower) + ", " + fmt("%.3f", four.upper) + "]; ";
  }
  // the exact fourth-moment engine against tensor quadrature on a small subset
  for (const auto& f : random_corpus(2, 3, 4, 200)) {
    engines = std::max(engines, std::abs(lq_norm(f, 4.0).value / tensor_lq_norm(f, 4.0).value - 1));
    engines = std::max(engines, std::abs(square_function_norm(f, 4.0).value / tensor_square_function_norm(f, 4.0).value - 1));
  }
  pass = dev2 <= tol::kLpTwo && K <= tol::kLpFour && engines <= tol::kEngines;
  detail += "p=2 deviation " + fmt("%.1e", dev2) + ", K=" + fmt("%.2f", K) + ", engines vs tensor " + fmt("%.1e", engines);
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion9() {
  const fs::path dir = fs::temp_directory_path() / ("hypercross_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json")
      << R"({"omega":{"d":2,"l":1,"kind":"power_log","r":[0.6,0.6],"b":[0,0]},"p":2,"q":4,"theta":2,)"
         R"("witness":"random","N_exponents":[4,5,6,7,8],"seed":5})";
  std::string texts[2];
  bool ok = true;
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / ("run" + std::to_string(i) + ".csv");
    const std::string cmd = std::string("'") + HYPERCROSS_CLI + "' rates --config '" + (dir / "cfg.json").string() +
                            "' --out '" + out.string() + "' > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    ok = ok && WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
    texts[i] = slurp(out);
  }
  fs::remove_all(dir);
  const bool same = ok && !texts[0].empty() && texts[0] == texts[1];
  return {same, ok ? (same ? std::to_string(texts[0].size()) + " identical bytes" : "outputs differ") : "CLI run failed"};
}

}  // namespace

int main() {
  report("[1]", "index sets match exhaustive scans", 60, criterion1);
  report("[2]", "cardinality law", 60, criterion2);
  report("[3]", "tail-sum domination", 60, criterion3);
  report("[4]", "kernel norm order", 300, criterion4);
  report("[5]", "norm equivalence", 600, criterion5);
  report("[6]", "lower bounds", 900, criterion6);
  report("[7]", "upper bounds", 1200, criterion7);
  report("[8]", "Littlewood-Paley ratios", 300, criterion8);
  report("[9]", "determinism", 60, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
