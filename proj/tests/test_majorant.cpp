#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "hypercross/error.hpp"
#include "hypercross/majorant.hpp"

using namespace hypercross;

namespace {

// Dilation condition on the grid, from the closed form of the power-log family:
// log2 Omega(2^{k-s}) - log2 Omega(2^{-s}) <= l |k| for k_j in {0,1,2}, k_j <= s_j.
bool oracle_dilation(const gen::PowerLog& m, int depth) {
  const int d = static_cast<int>(m.r.size());
  for (int j = 0; j < d; ++j) {
    // axes separate, and the worst case per axis is independent of the others
    for (int s = 0; s <= depth; ++s)
      for (int k = 1; k <= 2 && k <= s; ++k) {
        const double gain = m.r[j] * k + m.b[j] * (std::log2(std::max(1.0, double(s))) - std::log2(std::max(1.0, double(s - k))));
        if (gain > m.l * k + 1e-9) return false;
      }
  }
  return true;
}

}  // namespace

TEST_CASE("evaluate examples") {
  const auto half = Majorant::power(1, {0.5, 0.5});
  const double t[2] = {0.25, 0.25};
  CHECK(half.evaluate(t) == doctest::Approx(0.25).epsilon(1e-15));

  const double t0[2] = {0.0, 0.7};
  CHECK(Majorant::power_log(1, {0.6, 0.6}, {1, 0}).evaluate(t0) == 0.0);

  // {log2 4}_+ = 2, so 0.25^0.5 / 2
  const auto logm = Majorant::power_log(1, {0.5}, {1.0});
  const double q[1] = {0.25};
  CHECK(logm.evaluate(q) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("dyadic values") {
  CHECK(Majorant::power(1, {0.6, 0.6}).at_dyadic(DyadicIndex{0, 0}) == 1.0);
  CHECK(Majorant::power(1, {0.6, 0.6}).at_dyadic(DyadicIndex{1, 2}) == doctest::Approx(std::exp2(-1.8)).epsilon(1e-15));
  CHECK(Majorant::power_log(1, {0.5}, {1.0}).at_dyadic(DyadicIndex{3}) ==
        doctest::Approx(std::exp2(-1.5) / 3.0).epsilon(1e-15));
}

TEST_CASE("invalid majorants are rejected") {
  CHECK_THROWS_AS(Majorant::power(1, {1.0}), ConfigurationError);
  CHECK_THROWS_AS(Majorant::power(1, {0.0}), ConfigurationError);
  CHECK_THROWS_AS(Majorant::power_log(1, {0.5, 0.5}, {0.0}), ConfigurationError);
  CHECK_THROWS_AS(Majorant::power(0, {0.5}), ConfigurationError);
}

TEST_CASE("custom majorants are dyadic only") {
  const auto m = Majorant::custom(1, 1, [](const DyadicIndex& s) { return std::exp2(-0.5 * s[0]); });
  const double dyadic[1] = {0.125};
  CHECK(m.evaluate(dyadic) == doctest::Approx(std::exp2(-1.5)));
  const double off[1] = {0.3};
  CHECK_THROWS_AS(m.evaluate(off), DomainError);
}

TEST_CASE("psi_l examples") {
  CHECK(check_psi_l(Majorant::power(1, {0.5}), 12).pass());

  const int l = 1;
  const auto steep = Majorant::custom(1, l, [](const DyadicIndex& s) { return std::exp2(-(l + 1.0) * s[0]); });
  const PsiReport a = check_psi_l(steep, 12);
  CHECK(a.positivity.pass);
  CHECK(a.monotone.pass);
  CHECK_FALSE(a.dilation.pass);
  CHECK_FALSE(a.dilation.witness.empty());

  const auto rising = Majorant::custom(1, 1, [](const DyadicIndex& s) { return 1.0 + s[0]; });
  CHECK_FALSE(check_psi_l(rising, 12).monotone.pass);
}

TEST_CASE("Bari-Stechkin examples") {
  const auto tr = Majorant::power(1, {0.6});
  for (double alpha : {0.3, 0.6}) {
    const auto rep = check_bari_stechkin(tr, alpha, 1, 12);
    CHECK(rep.s_alpha_pass);
    CHECK(rep.c1 == doctest::Approx(1.0));
  }

  const auto tl = Majorant::custom(1, 1, [](const DyadicIndex& s) { return std::exp2(-1.0 * s[0]); });
  CHECK_FALSE(check_bari_stechkin(tl, 0.5, 1, 12).s_l_pass);

  const auto rep = check_bari_stechkin(Majorant::power_log(1, {0.5}, {1.0}), 0.4, 1, 12);
  CHECK(rep.s_alpha_pass);
  CHECK(std::isfinite(rep.c1));
  CHECK(rep.c1 >= 1.0);
}

TEST_CASE("property: power laws without logs are 2^{-<r,s>} and nonincreasing") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = gen::integer(rng, 1, 3);
    gen::PowerLog spec = gen::power_log(rng, d);
    spec.b.assign(static_cast<std::size_t>(d), 0.0);
    const Majorant m = spec.make();
    for (int k = 0; k < 50; ++k) {
      const DyadicIndex s = gen::index(rng, d, 16);
      double e = 0.0;
      for (int j = 0; j < d; ++j) e += spec.r[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(j)];
      CHECK(m.at_dyadic(s) == doctest::Approx(std::exp2(-e)).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: power-log family satisfies the grid conditions") {
  gen::Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = gen::integer(rng, 1, 2);
    const gen::PowerLog spec = gen::power_log(rng, d, 0.2);
    const Majorant m = spec.make();
    INFO("trial " << trial);
    const int depth = d == 1 ? 16 : 8;
    const PsiReport rep = check_psi_l(m, depth);
    CHECK(rep.positivity.pass);
    CHECK(rep.monotone.pass);
    CHECK(rep.dilation.pass == oracle_dilation(spec, depth));
    if (std::all_of(spec.b.begin(), spec.b.end(), [](double b) { return b == 0.0; })) CHECK(rep.dilation.pass);
    CHECK(check_bari_stechkin(m, spec.r_min() - 1.0 / 16, spec.l, 12).s_alpha_pass);

    // coordinatewise nonincreasing on the grid
    for (int k = 0; k < 40; ++k) {
      const DyadicIndex s = gen::index(rng, d, 15);
      for (int j = 0; j < d; ++j) {
        std::vector<int> up(s.coords().begin(), s.coords().end());
        ++up[static_cast<std::size_t>(j)];
        CHECK(m.at_dyadic(DyadicIndex(up)) <= m.at_dyadic(s));
      }
    }
  }
}

TEST_CASE("smoothness parameter validation") {
  SmoothnessParams P;
  P.p = 2;
  P.q = 4;
  P.alpha = 0.5;
  CHECK_NOTHROW(P.validate());
  P.q = 2;
  CHECK_THROWS_AS(P.validate(), ConfigurationError);
  P.q = 4;
  P.alpha = 0.2;
  CHECK_THROWS_AS(P.validate(), ConfigurationError);
  P.alpha = 0.5;
  P.theta = 0.5;
  CHECK_THROWS_AS(P.validate(), ConfigurationError);
}
