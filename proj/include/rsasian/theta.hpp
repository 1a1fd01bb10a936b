#pragma once

#include <memory>

#include "rsasian/errors.hpp"
#include "rsasian/quadrature.hpp"

namespace rsasian::yor {

/// Tuning for the Hartman-Watson integrand evaluation.
struct ThetaOptions {
  double double_path_min_t = 0.20;  ///< plain double + Kahan at or above this t
  double hard_min_t = 2e-4;         ///< AccuracyError below (precision cost guard)
  double tail_nats = 46.0;          ///< decay demanded beyond the cancellation scale
  double safety = 1.30;             ///< oversampling factor on the trapezoid spacing
  int max_points = 2'000'000;       ///< refuse rather than stall
  int max_refinements = 3;          ///< step-halving self-validation rounds
  double self_check_rel = 1e-9;     ///< accept when halving moves log-theta less than this
};

/// log of theta_r(t), the Hartman-Watson integrand
///   theta_r(t) = r/sqrt(2 pi^3 t) * e^{pi^2/(2t)} *
///                int_0^inf e^{-y^2/(2t)} e^{-r cosh y} sinh(y) sin(pi y / t) dy.
///
/// Evaluated through the contour-rotated equivalent (shift y -> y + i pi/2; the
/// vertical segment is purely real and drops out of the imaginary part):
///
///   theta_r(t) = r/sqrt(2 pi^3 t) * e^{pi^2/(8t)} *
///                int_0^inf e^{-w^2/(2t)} cosh(w) cos(pi w/(2t) - r sinh w) dw
///
/// which reduces the cancellation scale from pi^2/(2t) to pi^2/(8t).  The
/// remaining cancellation is certified by working precision: double + Kahan
/// when t >= double_path_min_t, MPFR with pi^2/(8t)*log2(e) + guard bits below.
/// Returns -infinity when theta underflows.  Throws AccuracyError if t is
/// below hard_min_t or the step-halving self check cannot converge.
double log_theta(double r, double t, const ThetaOptions& opt = {});

double theta(double r, double t, const ThetaOptions& opt = {});

/// log(theta_r(t)) - log(r) tabulated over log r at fixed t, cubic spline with
/// refinement until mid-point interpolation error is below ~3e-7.
class ThetaTable {
 public:
  ThetaTable(double t, double r_lo, double r_hi, const ThetaOptions& opt = {});
  double t() const { return t_; }
  double r_lo() const { return r_lo_; }
  double r_hi() const { return r_hi_; }
  bool covers(double r_lo, double r_hi) const { return r_lo >= r_lo_ && r_hi <= r_hi_; }
  double log_theta(double r) const;

 private:
  double t_, r_lo_, r_hi_;
  quad::CubicSpline spline_;
};

/// Process-wide cache of tables keyed by t (exact bits); a cached table is
/// reused when it covers the requested r-range and rebuilt wider otherwise.
std::shared_ptr<const ThetaTable> theta_table(double t, double r_lo, double r_hi,
                                              const ThetaOptions& opt = {});

}  // namespace rsasian::yor
