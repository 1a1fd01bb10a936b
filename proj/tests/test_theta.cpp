#include <doctest.h>

#include <cmath>
#include <vector>

#include "rsasian/bridge_moments.hpp"
#include "rsasian/mpreal.hpp"
#include "rsasian/quadrature.hpp"
#include "rsasian/theta.hpp"
#include "rsasian/yor_density.hpp"

using namespace rsasian;

namespace {

// Test-only oracle: the Hartman-Watson integrand evaluated from its defining
// (unrotated) expression by a high-precision trapezoid.  Independent of the
// contour-rotated production path.  The accuracy budget escalates until the
// integral clears its own roundoff floor (the sin factor can cancel far more
// than e^{-pi^2/2t} at large r).
double log_theta_original_oracle(double r, double t) {
  auto env_log = [&](double y) {
    return -y * y / (2.0 * t) - r * std::cosh(y) + std::log(std::sinh(y));
  };
  double y_peak = 1e-3, peak_log = env_log(y_peak);
  for (double y = 2e-3; y < 60.0; y *= 1.05) {
    const double e = env_log(y);
    if (e > peak_log) {
      peak_log = e;
      y_peak = y;
    }
  }

  double extra = 0.0;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const double budget = M_PI * M_PI / (2.0 * t) + 70.0 + extra;
    const mpfr_prec_t prec =
        static_cast<mpfr_prec_t>(budget * 1.4426950408889634 + 160.0);
    double y_max = std::max(1.0, 2.0 * y_peak);
    while (env_log(y_max) > peak_log - budget - 5.0) y_max *= 1.2;

    long n_used = 0;
    auto integrate = [&](double h) {
      const long n = static_cast<long>(std::ceil(y_max / h));
      n_used = n;
      Mp y(prec), tmp(prec), val(prec), sum(prec), hmp(prec), rmp(prec), inv2t(prec),
          piot(prec), sh(prec), ch(prec);
      mpfr_set_d(rmp, r, MPFR_RNDN);
      mpfr_set_d(inv2t, 2.0 * t, MPFR_RNDN);
      mpfr_ui_div(inv2t, 1, inv2t, MPFR_RNDN);
      mpfr_const_pi(piot, MPFR_RNDN);
      mpfr_div_d(piot, piot, t, MPFR_RNDN);
      mpfr_set_d(hmp, h, MPFR_RNDN);
      mpfr_set_zero(sum.ptr(), 1);
      for (long k = 1; k <= n; ++k) {
        mpfr_mul_si(y, hmp, k, MPFR_RNDN);
        mpfr_sqr(tmp, y, MPFR_RNDN);
        mpfr_mul(tmp, tmp, inv2t, MPFR_RNDN);
        mpfr_neg(tmp, tmp, MPFR_RNDN);
        mpfr_sinh_cosh(sh, ch, y, MPFR_RNDN);
        mpfr_mul(val, rmp, ch, MPFR_RNDN);
        mpfr_sub(tmp, tmp, val, MPFR_RNDN);
        mpfr_exp(val, tmp, MPFR_RNDN);
        mpfr_mul(val, val, sh, MPFR_RNDN);
        mpfr_mul(tmp, piot, y, MPFR_RNDN);
        mpfr_sin(tmp, tmp, MPFR_RNDN);
        mpfr_mul(val, val, tmp, MPFR_RNDN);
        mpfr_add(sum, sum, val, MPFR_RNDN);
      }
      mpfr_mul_d(sum, sum, h, MPFR_RNDN);
      if (mpfr_zero_p(sum.ptr()) || mpfr_sgn(sum.ptr()) < 0)
        return -std::numeric_limits<double>::infinity();
      Mp lg(prec);
      mpfr_log(lg, sum, MPFR_RNDN);
      return mpfr_get_d(lg, MPFR_RNDN);
    };

    double h = std::min(2.0 * t / 16.0, y_max / 64.0);
    double v_prev = integrate(h);
    bool stable = false;
    double v = v_prev;
    for (int round = 0; round < 4; ++round) {
      h *= 0.5;
      v = integrate(h);
      if (std::isfinite(v) && std::isfinite(v_prev) && std::abs(v - v_prev) < 1e-8) {
        stable = true;
        break;
      }
      v_prev = v;
    }
    const double floor_log = peak_log + std::log(static_cast<double>(n_used)) -
                             static_cast<double>(prec) * M_LN2;
    if (stable && v > floor_log + 28.0)
      return std::log(r) - 0.5 * std::log(2.0 * M_PI * M_PI * M_PI * t) +
             M_PI * M_PI / (2.0 * t) + v;
    extra += std::isfinite(v) ? std::max(floor_log + 70.0 - v, 100.0) : budget;
  }
  FAIL("oracle failed to stabilize");
  return 0.0;
}

}  // namespace

TEST_SUITE("theta") {

TEST_CASE("rotated evaluation agrees with the original-form oracle") {
  // Spans the double path, the rotated double path and the MPFR path.
  const std::vector<std::pair<double, double>> points = {
      {1.0, 0.5},  {0.1, 0.5},  {10.0, 0.5}, {1.0, 2.0},  {25.0, 1.0},
      {1.0, 0.25}, {5.0, 0.25}, {2.0, 0.1},  {20.0, 0.1}, {1.0, 0.05},
      {60.0, 0.05}, {5.0, 0.02}, {120.0, 0.02}, {30.0, 0.01}, {300.0, 0.01}};
  for (auto [r, t] : points) {
    CAPTURE(r);
    CAPTURE(t);
    const double mine = yor::log_theta(r, t);
    const double oracle = log_theta_original_oracle(r, t);
    CHECK(mine == doctest::Approx(oracle).epsilon(5e-7));
  }
}

TEST_CASE("frozen oracle values") {
  // Pinned after cross-checking against the original-form oracle.
  CHECK(yor::theta(1.0, 0.5) == doctest::Approx(0.471739943913281).epsilon(1e-9));
  CHECK(yor::theta(2.0, 0.25) == doctest::Approx(0.720704285845821).epsilon(1e-9));
}

TEST_CASE("theta is nonnegative on the example grid") {
  for (double r : {0.1, 1.0, 10.0})
    for (double t : {0.1, 0.5, 2.0}) CHECK(yor::theta(r, t) >= 0.0);
}

TEST_CASE("time integral of theta recovers the Bessel I0 normalization") {
  // int_0^infty theta_r(t) dt = I_0(r).  Log-spaced panels; theta decays like
  // t^{-3/2} at large t, so the truncated tail is estimated from the endpoint.
  for (double r : {0.8, 2.0}) {
    const double t_hi = 400.0;
    const auto rule = quad::composite(std::log(0.02), std::log(t_hi), 48, 5);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double t = std::exp(rule.x[k]);
      acc += rule.w[k] * t * yor::theta(r, t);
    }
    acc += 2.0 * t_hi * yor::theta(r, t_hi);  // int_T^inf C t^{-3/2} = 2 C / sqrt(T)
    CHECK(acc == doctest::Approx(std::cyl_bessel_i(0.0, r)).epsilon(5e-3));
  }
}

TEST_CASE("conditional density normalizes and reproduces the bridge mean") {
  struct Pt { double t, z; };
  for (const Pt pt : {Pt{0.25, 0.0}, Pt{0.5, 0.3}, Pt{1.0, -0.5}}) {
    const auto moments = yor::bridge_cond_moments(pt.t, pt.z);
    const auto env = yor::ShiftedLognormal::fit(moments);
    const double wlo = 0.25 * env.quantile(1e-8);
    const double whi = 4.0 * env.quantile(1.0 - 1e-8);
    const auto rule = quad::composite(std::log(wlo), std::log(whi), 24, 6);
    double mass = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double w = std::exp(rule.x[k]);
      const double f = yor::f_cond(pt.t, pt.z, w);
      mass += rule.w[k] * w * f;
      mean += rule.w[k] * w * f * w;
    }
    CAPTURE(pt.t);
    CAPTURE(pt.z);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(mean == doctest::Approx(yor::bridge_cond_mean(pt.t, pt.z)).epsilon(2e-4));
  }
}

TEST_CASE("unconditional mean of the exponential functional") {
  // E[A_t^nu] = (e^{(2nu+2)t} - 1)/(2nu+2) checked by the double integral
  // of w f(t, z/2, w) against the doubled Gaussian endpoint density.
  const double t = 1.0, nu = 0.0;
  const double sd = 2.0 * std::sqrt(t);
  const auto zrule = quad::composite(2.0 * nu * t - 8.0 * sd, 2.0 * nu * t + 8.0 * sd, 16, 5);
  double acc = 0.0;
  for (std::size_t kz = 0; kz < zrule.size(); ++kz) {
    const double z = zrule.x[kz];
    const auto env = yor::ShiftedLognormal::fit(yor::bridge_cond_moments(t, 0.5 * z));
    const double wlo = 0.25 * env.quantile(1e-8), whi = 4.0 * env.quantile(1.0 - 1e-8);
    const auto wrule = quad::composite(std::log(wlo), std::log(whi), 20, 5);
    double inner = 0.0;
    for (std::size_t kw = 0; kw < wrule.size(); ++kw) {
      const double w = std::exp(wrule.x[kw]);
      inner += wrule.w[kw] * w * w * yor::f_cond(t, 0.5 * z, w);
    }
    acc += zrule.w[kz] * quad::normal_pdf((z - 2.0 * nu * t) / sd) / sd * inner;
  }
  CHECK(acc == doctest::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(5e-4));
  CHECK((std::exp(2.0) - 1.0) / 2.0 == doctest::Approx(3.194528).epsilon(1e-6));
}

TEST_CASE("theta table tracks direct evaluation") {
  const double t = 0.02;
  yor::ThetaTable table(t, 0.5, 400.0);
  for (double r : {0.7, 3.0, 17.0, 80.0, 350.0})
    CHECK(std::abs(table.log_theta(r) - yor::log_theta(r, t)) < 1e-6);
}

TEST_CASE("t below the hard floor raises AccuracyError") {
  CHECK_THROWS_AS(yor::log_theta(1.0, 1e-5), AccuracyError);
}

}  // TEST_SUITE
