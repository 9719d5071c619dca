#include "hypercross/norms.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "hypercross/error.hpp"
#include "hypercross/moments.hpp"
#include "hypercross/tensor_quadrature.hpp"

namespace hypercross {

const char* to_string(NormEngine e) noexcept {
  switch (e) {
    case NormEngine::automatic: return "automatic";
    case NormEngine::single_block: return "single_block";
    case NormEngine::parseval: return "parseval";
    case NormEngine::moment4: return "moment4";
    case NormEngine::tensor: return "tensor";
  }
  return "?";
}

const LevelNorms& level_norms(double p, const QuadratureGrid& grid) {
  using Key = std::tuple<double, double, int, double>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<LevelNorms>> cache;
  const Key key{p, grid.T, grid.points_per_unit, grid.rel_tol};
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<LevelNorms>(p, grid)).first;
  return *it->second;
}

double parseval_l2_squared(const BlockFunction& f) {
  double acc = 0.0;
  for (const auto& [s, c] : f.coeffs()) {
    double m = c * c;
    for (int j = 0; j < s.dim(); ++j) m *= band_measure(s[j]);
    acc += m;
  }
  return acc;
}

namespace {

void require_q(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("L_q norm needs 1 < q < inf");
}

LqNorm exact(double v, NormEngine e) { return LqNorm{v, v, v, e}; }

LqNorm single_block(const BlockFunction& f, double q, const QuadratureGrid& grid) {
  const auto& [s, c] = *f.coeffs().begin();
  const LevelNorms& ln = level_norms(q, grid);
  LqNorm out{std::abs(c), std::abs(c), std::abs(c), NormEngine::single_block};
  for (int j = 0; j < s.dim(); ++j) {
    const NormEstimate& b = ln.base(s[j]);
    const double scale = s[j] == 0 ? 1.0 : std::exp2((s[j] - 1) * (1.0 - 1.0 / q));
    out.value *= b.value * scale;
    out.lower *= b.lower * scale;
    out.upper *= b.upper * scale;
  }
  return out;
}

TensorQuadratureOptions tensor_options(const QuadratureGrid& grid) {
  TensorQuadratureOptions o;
  o.points_per_unit = grid.points_per_unit;
  o.rel_tol = grid.rel_tol;
  if (grid.T > 0.0) o.periods = std::max(1, static_cast<int>(std::floor(grid.T / (2.0 * std::numbers::pi))));
  return o;
}

void check_width(const LqNorm& n, const QuadratureGrid& grid) {
  if (n.width() > grid.rel_tol * n.value) {
    std::ostringstream os;
    os << "L_q norm certificate width " << n.width() << " exceeds rel_tol=" << grid.rel_tol << " of value " << n.value;
    throw AccuracyError(os.str(), n.value, n.width());
  }
}

}  // namespace

LqNorm lq_norm(const BlockFunction& f, double q, const QuadratureGrid& grid, NormEngine engine) {
  require_q(q);
  if (f.empty()) return exact(0.0, NormEngine::automatic);
  if (engine == NormEngine::automatic) {
    if (f.size() == 1)
      engine = NormEngine::single_block;
    else if (q == 2.0)
      engine = NormEngine::parseval;
    else if (q == 4.0)
      engine = NormEngine::moment4;
    else
      engine = NormEngine::tensor;
  }
  LqNorm out;
  switch (engine) {
    case NormEngine::single_block:
      if (f.size() != 1) throw ConfigurationError("single_block engine needs exactly one block");
      out = single_block(f, q, grid);
      break;
    case NormEngine::parseval:
      if (q != 2.0) throw ConfigurationError("Parseval engine needs q = 2");
      out = exact(std::sqrt(parseval_l2_squared(f)), engine);
      break;
    case NormEngine::moment4:
      if (q != 4.0) throw ConfigurationError("moment engine needs q = 4");
      out = exact(std::pow(std::max(0.0, l4_power(f)), 0.25), engine);
      break;
    case NormEngine::tensor: {
      const TensorNorm t = tensor_lq_norm(f, q, tensor_options(grid));
      out = LqNorm{t.value, t.lower, t.upper, engine};
      break;
    }
    case NormEngine::automatic: break;
  }
  check_width(out, grid);
  return out;
}

LqNorm square_function_norm(const BlockFunction& f, double p, const QuadratureGrid& grid) {
  require_q(p);
  if (f.empty()) return exact(0.0, NormEngine::automatic);
  if (p == 2.0) return exact(std::sqrt(parseval_l2_squared(f)), NormEngine::parseval);
  if (p == 4.0) return exact(std::pow(square_function_l4_power(f), 0.25), NormEngine::moment4);
  const TensorNorm t = tensor_square_function_norm(f, p, tensor_options(grid));
  LqNorm out{t.value, t.lower, t.upper, NormEngine::tensor};
  check_width(out, grid);
  return out;
}

}  // namespace hypercross
