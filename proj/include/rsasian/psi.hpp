#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "rsasian/bridge_moments.hpp"
#include "rsasian/model.hpp"
#include "rsasian/theta.hpp"

namespace rsasian::yor {

struct QuadratureConfig {
  double z_halfwidth_sd = 8.0;  ///< z'-window half-width in standard deviations
  int z_panels = 12;
  int z_order = 4;
  int w_panels = 10;  ///< log-spaced panels per conditional
  int w_order = 4;
  double w_quantile_eps = 1e-8;  ///< quantile envelope of the lognormal proxy
  double range_safety = 1.5;
  double norm_tol = 1e-4;   ///< conditional mass self-check tolerance
  double tmin_prime = 0.01; ///< below this t', conditionals use the moment proxy
  int outer_order = 4;      ///< engine outer time rule, per time panel
  ThetaOptions theta;

  void check() const;  // throws std::invalid_argument
};

/// Transformed quantities feeding the joint density of (Z_t, A_t) conditional
/// on X_s = e^z, A_s = a, Y_s = i and first jump at s + dt.
struct PsiParams {
  std::size_t regime = 0;
  double z = 0.0;
  double a = 0.0;
  double dt = 0.0;
  double t_prime = 0.0;  ///< sigma^2(i) dt / 4
  double nu = 0.0;       ///< 2 nu(i) / sigma^2(i)
  double c = 0.0;        ///< sigma^2(i) e^{-z} / 4, so w(a') = c (a' - a)

  static PsiParams make(const RegimeModel& model, std::size_t i, double z, double a,
                        double dt);
};

struct CondNode {
  double w;
  double weight;  // normalized: conditional weights sum to 1
};

struct ZNode {
  double zp = 0.0;
  double zweight = 0.0;   // Gauss weight x exact Gaussian marginal
  double raw_mass = 0.0;  // conditional quadrature mass before normalization
  bool proxy = false;
  ShiftedLognormal envelope;  // conditional law proxy (range, fallback density)
  double w_lo = 0.0, w_hi = 0.0;
  std::vector<CondNode> cond;
};

/// Weighted node set over (z', w) representing the joint law at fixed
/// (regime, dt): the z' marginal is exactly Gaussian N(2 nu t', (2 sqrt t')^2)
/// and the conditional of w given z' carries Yor's density f(t', z'/2, w) when
/// t' >= tmin_prime, the moment-matched proxy below.  In the original (z', a')
/// variables, a' = a + w / c and the node weights are unchanged, so one slice
/// serves every (z, a).
class PsiSlice {
 public:
  PsiSlice(const RegimeModel& model, std::size_t regime, double dt,
           const QuadratureConfig& cfg);

  double dt() const { return dt_; }
  double t_prime() const { return t_prime_; }
  double nu() const { return nu_; }
  bool uses_proxy() const { return proxy_; }
  const std::vector<ZNode>& nodes() const { return nodes_; }

  /// Raw self-check integrals (unnormalized conditionals).
  double identity_one() const;
  double identity_expz() const;
  double expz_target() const { return std::exp((2.0 * nu_ + 2.0) * t_prime_); }

  double integrate(const std::function<double(double, double)>& g) const;

  double cond_density(std::size_t p, double w) const;
  std::vector<CondNode> conditional_with_breakpoints(
      std::size_t p, const std::vector<double>& breaks) const;

 private:
  void build_conditional(ZNode& node, const QuadratureConfig& cfg);

  double dt_, t_prime_, nu_;
  bool proxy_ = false;
  std::vector<ZNode> nodes_;
  std::shared_ptr<const ThetaTable> table_;  // f-route only
  int w_order_ = 4;
};

/// Pointwise joint density of (Z_t, A_t) at (z', a'); zero for a' < a.
double psi_value(const PsiParams& p, double z_prime, double a_prime,
                 const QuadratureConfig& cfg = {});

}  // namespace rsasian::yor
