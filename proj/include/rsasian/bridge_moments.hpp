#pragma once

#include <cstddef>

namespace rsasian::yor {

/// Raw conditional moments of W = int_0^t e^{2 xi_u} du given the endpoint
/// xi_t = zeta, where xi is a Brownian motion (any drift; conditioning removes
/// it).  Computed from the bridge law xi_u ~ N(u zeta / t, u(t-u)/t) with
/// Cov(xi_u, xi_v) = u(t-v)/t for u <= v, via 1-, 2- and 3-fold Gauss rules.
struct CondMoments {
  double m1 = 0.0;    // E[W | endpoint]
  double raw2 = 0.0;  // E[W^2 | endpoint]
  double raw3 = 0.0;  // E[W^3 | endpoint]
};

CondMoments bridge_cond_moments(double t, double zeta);

/// Closed-form conditional mean alone (cheap; used as a theta cross-check):
/// E[W | xi_t = zeta] = int_0^t e^{2 u zeta / t + 2 u (t - u)/t} du.
double bridge_cond_mean(double t, double zeta);

/// Shifted lognormal W ~ c + exp(mu + sigma N), parameterized to avoid
/// cancellation: scale = e^{mu + sigma^2/2} = mean - c.
struct ShiftedLognormal {
  double mean = 0.0;
  double sd = 0.0;
  double scale = 0.0;
  double sigma = 0.0;
  bool degenerate = false;  // point mass at mean

  /// Moment fit: three moments when the implied skew is usable, otherwise a
  /// plain two-moment lognormal (shift 0).
  static ShiftedLognormal fit(const CondMoments& m);

  double shift() const { return mean - scale; }
  double pdf(double w) const;
  double quantile(double p) const;
};

}  // namespace rsasian::yor
