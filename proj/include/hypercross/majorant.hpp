#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hypercross/dyadic_index.hpp"

namespace hypercross {

enum class MajorantKind { power_log, custom_dyadic };

/// A majorant of mixed-modulus type of order l on R_+^d.
///
/// Two representations are supported:
///  - power_log: Omega(t) = prod_j t_j^{r_j} / {log2(1/t_j)}_+^{b_j} with {x}_+ = max(1, x),
///    and Omega(t) = 0 as soon as one coordinate vanishes;
///  - custom_dyadic: values are known only at dyadic points 2^{-s}, s in Z_+^d.
///
/// Every downstream computation consumes the majorant through at_dyadic()/log2_at_dyadic()
/// only, except the definition norm, which needs evaluate() on (0,2]^d.
class Majorant {
 public:
  using DyadicValues = std::function<double(const DyadicIndex&)>;

  static Majorant power_log(int l, std::vector<double> r, std::vector<double> b);
  static Majorant power(int l, std::vector<double> r);
  /// Custom majorant given by an arbitrary total map s -> Omega(2^{-s}) > 0.
  static Majorant custom(int d, int l, DyadicValues values);
  /// Custom majorant backed by a finite table; lookups outside the table raise DomainError.
  static Majorant table(int d, int l, std::map<DyadicIndex, double> values);

  int dim() const noexcept { return d_; }
  int order() const noexcept { return l_; }
  MajorantKind kind() const noexcept { return kind_; }
  const std::vector<double>& r() const noexcept { return r_; }
  const std::vector<double>& b() const noexcept { return b_; }
  /// Non-null only for table-backed custom majorants.
  const std::map<DyadicIndex, double>* table_values() const noexcept { return table_.get(); }

  /// Omega(t) for t in [0,2]^d. Custom kinds accept only dyadic points 2^{-s}.
  double evaluate(std::span<const double> t) const;
  /// Omega(2^{-s}).
  double at_dyadic(const DyadicIndex& s) const;
  /// log2 Omega(2^{-s}); exact sums of logs for the power_log family.
  double log2_at_dyadic(const DyadicIndex& s) const;

 private:
  Majorant() = default;

  int d_ = 0;
  int l_ = 1;
  MajorantKind kind_ = MajorantKind::power_log;
  std::vector<double> r_;
  std::vector<double> b_;
  DyadicValues custom_;
  std::shared_ptr<const std::map<DyadicIndex, double>> table_;
};

/// Parameters of the class S^Omega_{p,theta}B and of the target metric L_q.
struct SmoothnessParams {
  double p = 2.0;
  double q = 4.0;
  double theta = std::numeric_limits<double>::infinity();
  int l = 1;
  double alpha = 0.5;
  int d = 1;

  double beta() const noexcept { return 1.0 / p - 1.0 / q; }
  bool theta_infinite() const noexcept { return theta == std::numeric_limits<double>::infinity(); }
  /// Throws ConfigurationError unless 1<p<q<inf, 1<=theta<=inf, alpha>beta>0, beta<1, l>=1, d>=1.
  void validate() const;
};

struct ConditionResult {
  bool pass = true;
  std::string witness;  // first failing grid pair, empty on pass
};

/// Grid check of the three defining conditions of Psi_l. A pass means
/// "consistent with the conditions on the dyadic grid", never a proof.
struct PsiReport {
  int grid_depth = 0;
  ConditionResult positivity;  // condition 1
  ConditionResult monotone;    // condition 2
  ConditionResult dilation;    // condition 3, m_j in {1,2,4}
  bool pass() const noexcept { return positivity.pass && monotone.pass && dilation.pass; }
};

PsiReport check_psi_l(const Majorant& omega, int grid_depth);

/// Grid estimates of the Bari-Stechkin constants, taken along every axis with the other
/// coordinates frozen at grid values. A condition passes when its constant is finite and
/// identical on the full grid and on the sub-grid of depth floor(3*grid_depth/4), i.e. the
/// estimate has stopped moving as the grid deepens.
struct BariStechkinReport {
  double alpha = 0.0;
  int l = 1;
  int grid_depth = 0;
  bool s_alpha_pass = false;
  double c1 = 0.0;  // smallest C1 with phi(t1)/t1^alpha <= C1 phi(t2)/t2^alpha, t1 <= t2
  bool s_l_pass = false;
  double gamma = 0.0;  // best gamma on the declared grid (0 when none passes)
  double c2 = 0.0;     // largest C2 with phi(t1)/t1^{l-gamma} >= C2 phi(t2)/t2^{l-gamma}
  std::vector<double> gamma_grid;
};

BariStechkinReport check_bari_stechkin(const Majorant& omega, double alpha, int l, int grid_depth);

/// The (S^alpha) constant alone; used to certify enumeration boxes.
double bari_stechkin_c1(const Majorant& omega, double alpha, int grid_depth);

}  // namespace hypercross
