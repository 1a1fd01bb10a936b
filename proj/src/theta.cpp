#include "rsasian/theta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rsasian/mpreal.hpp"

namespace rsasian::yor {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_cosh(double w) { return w + std::log1p(std::exp(-2.0 * w)) - M_LN2; }
double log_sinh(double y) {
  if (y <= 0.0) return kNegInf;
  return y + std::log1p(-std::exp(-2.0 * y)) - M_LN2;
}

// ---------------------------------------------------------------------------
// Rotated representation, integrand  e^{-w^2/2t} cosh(w) cos(pi w/2t - r sinh w),
// even in w.  The magnitude envelope is r-free; all r-dependence is phase.
// ---------------------------------------------------------------------------

double rot_env_log(double w, double t) { return -w * w / (2.0 * t) + log_cosh(w); }

// Smallest w with envelope below e^{-drop} (absolute, envelope(0) = 1).
double rot_env_cutoff(double t, double drop) {
  double hi = std::sqrt(2.0 * t * drop) + 1.0;
  while (rot_env_log(hi, t) > -drop) hi *= 1.5;
  double lo = 0.0;
  for (int k = 0; k < 80 && hi - lo > 1e-12 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (rot_env_log(mid, t) > -drop ? lo : hi) = mid;
  }
  return hi;
}

double rot_env_peak_log(double t) {
  if (t <= 1.0) return 0.0;  // peak at w = 0
  double lo = 0.0, hi = t;   // root of tanh w = w/t lies below t
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    (std::tanh(mid) > mid / t ? lo : hi) = mid;
  }
  return rot_env_log(0.5 * (lo + hi), t);
}

struct Plan {
  double w_max = 0.0;
  double h = 0.0;
  long n = 0;
};

Plan rot_plan(double r, double t, double budget_nats, const ThetaOptions& opt) {
  Plan p;
  const double peak = rot_env_peak_log(t);
  p.w_max = rot_env_cutoff(t, budget_nats + 5.0 - peak);
  // Trapezoid aliasing: keep 2 pi / h beyond the largest instantaneous
  // frequency anywhere on the kept range plus the Gaussian spectral width.
  const double omega = M_PI / (2.0 * t) + r * std::cosh(p.w_max);
  const double delta = std::sqrt(2.0 * budget_nats / t);
  p.h = 2.0 * M_PI / ((omega + delta) * opt.safety);
  p.h = std::min(p.h, p.w_max / 32.0);
  p.n = static_cast<long>(std::ceil(p.w_max / p.h));
  return p;
}

struct IntegralValue {
  double log_abs = kNegInf;  // log |integral|
  int sign = 0;
  double rel_err = std::numeric_limits<double>::infinity();  // estimated
  double log_peak = 0.0;  // envelope peak (natural log)
};

// Double-precision trapezoid with Kahan compensation and step-halving
// self-validation.
IntegralValue rot_integrate_double(double r, double t, double budget_nats,
                                   const ThetaOptions& opt) {
  const Plan plan = rot_plan(r, t, budget_nats, opt);
  const double inv2t = 1.0 / (2.0 * t);
  const double pi2t = M_PI * inv2t;
  auto term = [&](double w) {
    return std::exp(-w * w * inv2t) * std::cosh(w) * std::cos(pi2t * w - r * std::sinh(w));
  };
  quad::KahanSum sum;
  sum.add(0.5);  // w = 0 term, half weight
  double h = plan.h;
  long n = plan.n;
  for (long k = 1; k <= n; ++k) sum.add(term(k * h));
  double prev = sum.value() * h;
  double value = prev;
  for (int round = 0; round < opt.max_refinements + 2; ++round) {
    const double h2 = 0.5 * h;
    for (long j = 1; j <= 2 * n; j += 2) sum.add(term(j * h2));
    h = h2;
    n *= 2;
    value = sum.value() * h;
    if (std::abs(value - prev) <= opt.self_check_rel * std::max(std::abs(value), 1e-280))
      break;
    prev = value;
  }
  IntegralValue out;
  out.log_peak = rot_env_peak_log(t);
  const double floor_abs = std::exp(out.log_peak) * static_cast<double>(n) * 4e-16;
  out.sign = value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
  out.log_abs = value != 0.0 ? std::log(std::abs(value)) : kNegInf;
  if (std::abs(value) > 0.0)
    out.rel_err = floor_abs / std::abs(value) + opt.self_check_rel +
                  std::exp(out.log_peak - budget_nats - out.log_abs);
  return out;
}

// Same integral in MPFR; precision follows the accuracy budget in nats.
// All exponentials run on incremental recurrences, so the per-point cost is
// one cosine plus a handful of multiplies:
//   e^{-w_{k+step}^2/2t} = e^{-w_k^2/2t} * fac_k,   fac_{k+step} = fac_k * facstep
//   e^{w_{k+step}}       = e^{w_k} * estep,         cosh/sinh from e^w and 1/e^w.
IntegralValue rot_integrate_mpfr(double r, double t, double budget_nats,
                                 const ThetaOptions& opt) {
  const Plan plan = rot_plan(r, t, budget_nats, opt);
  if (plan.n > opt.max_points)
    throw AccuracyError("theta: oscillatory rule would need too many points");
  const double log2e = 1.4426950408889634;
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(
      (budget_nats + 40.0) * log2e + 64.0 +
      2.0 * std::log2(static_cast<double>(plan.n) + 2.0));

  Mp sum(prec), tmp(prec), tmp2(prec), gauss(prec), fac(prec), facstep(prec), ew(prec),
      einv(prec), estep(prec), phase(prec), phstep(prec), rmp(prec), termv(prec),
      c_half(prec), integral(prec), prev(prec);
  mpfr_set_d(rmp, r, MPFR_RNDN);
  mpfr_set_d(sum, 0.5, MPFR_RNDN);  // w = 0 term

  // Adds terms k = k0, k0+step, ... (< kend) at spacing h_unit (w = k h_unit).
  auto accumulate = [&](double h_unit, long k0, long step, long kend) {
    // c = h_unit^2 / (2t) as the Gaussian exponent unit
    mpfr_set_d(c_half, h_unit, MPFR_RNDN);
    mpfr_sqr(c_half, c_half, MPFR_RNDN);
    mpfr_div_d(c_half, c_half, 2.0 * t, MPFR_RNDN);
    // gauss = e^{-k0^2 c}
    mpfr_mul_si(tmp, c_half, -k0 * k0, MPFR_RNDN);
    mpfr_exp(gauss, tmp, MPFR_RNDN);
    // fac = e^{-(2 k0 step + step^2) c}
    mpfr_mul_si(tmp, c_half, -(2 * k0 * step + step * step), MPFR_RNDN);
    mpfr_exp(fac, tmp, MPFR_RNDN);
    // facstep = e^{-2 step^2 c}
    mpfr_mul_si(tmp, c_half, -2 * step * step, MPFR_RNDN);
    mpfr_exp(facstep, tmp, MPFR_RNDN);
    // ew = e^{k0 h}, estep = e^{step h}
    mpfr_set_d(tmp, h_unit, MPFR_RNDN);
    mpfr_mul_si(tmp2, tmp, k0, MPFR_RNDN);
    mpfr_exp(ew, tmp2, MPFR_RNDN);
    mpfr_mul_si(tmp2, tmp, step, MPFR_RNDN);
    mpfr_exp(estep, tmp2, MPFR_RNDN);
    // phase = pi k0 h / 2t, phstep = pi step h / 2t
    mpfr_const_pi(tmp2, MPFR_RNDN);
    mpfr_mul(tmp2, tmp2, tmp, MPFR_RNDN);
    mpfr_div_d(tmp2, tmp2, 2.0 * t, MPFR_RNDN);
    mpfr_mul_si(phase, tmp2, k0, MPFR_RNDN);
    mpfr_mul_si(phstep, tmp2, step, MPFR_RNDN);

    for (long k = k0; k < kend; k += step) {
      mpfr_ui_div(einv, 1, ew, MPFR_RNDN);
      // termv = cos(phase - r sinh w) * cosh w * gauss
      mpfr_sub(tmp, ew, einv, MPFR_RNDN);
      mpfr_mul_d(tmp, tmp, 0.5, MPFR_RNDN);  // sinh
      mpfr_mul(tmp, tmp, rmp, MPFR_RNDN);
      mpfr_sub(tmp, phase, tmp, MPFR_RNDN);
      mpfr_cos(termv, tmp, MPFR_RNDN);
      mpfr_add(tmp, ew, einv, MPFR_RNDN);
      mpfr_mul_d(tmp, tmp, 0.5, MPFR_RNDN);  // cosh
      mpfr_mul(termv, termv, tmp, MPFR_RNDN);
      mpfr_mul(termv, termv, gauss, MPFR_RNDN);
      mpfr_add(sum, sum, termv, MPFR_RNDN);
      // advance recurrences
      mpfr_mul(gauss, gauss, fac, MPFR_RNDN);
      mpfr_mul(fac, fac, facstep, MPFR_RNDN);
      mpfr_mul(ew, ew, estep, MPFR_RNDN);
      mpfr_add(phase, phase, phstep, MPFR_RNDN);
    }
  };

  long n = plan.n;
  double h = plan.h;
  accumulate(h, 1, 1, n + 1);
  mpfr_mul_d(prev.ptr(), sum.ptr(), h, MPFR_RNDN);
  bool converged = false;
  for (int round = 0; round < opt.max_refinements; ++round) {
    const double h2 = 0.5 * h;
    accumulate(h2, 1, 2, 2 * n);
    h = h2;
    n *= 2;
    mpfr_mul_d(integral.ptr(), sum.ptr(), h, MPFR_RNDN);
    mpfr_sub(tmp, integral, prev, MPFR_RNDN);
    mpfr_abs(tmp, tmp, MPFR_RNDN);
    mpfr_abs(termv, integral, MPFR_RNDN);
    mpfr_mul_d(termv, termv, opt.self_check_rel, MPFR_RNDN);
    const bool ok = mpfr_cmp(tmp, termv) <= 0;
    mpfr_set(prev.ptr(), integral.ptr(), MPFR_RNDN);
    if (ok) {
      converged = true;
      break;
    }
  }
  mpfr_set(integral.ptr(), prev.ptr(), MPFR_RNDN);

  IntegralValue out;
  out.log_peak = rot_env_peak_log(t);
  out.sign = mpfr_sgn(integral.ptr());
  if (out.sign != 0) {
    mpfr_abs(tmp, integral, MPFR_RNDN);
    mpfr_log(tmp, tmp, MPFR_RNDN);
    out.log_abs = mpfr_get_d(tmp, MPFR_RNDN);
  }
  const double log_floor = out.log_peak + std::log(static_cast<double>(n)) -
                           static_cast<double>(prec) * M_LN2 + 6.0 * M_LN2;
  if (out.sign == 0 || out.log_abs < log_floor) {
    out.sign = 0;
    out.log_abs = kNegInf;
  } else {
    out.rel_err =
        std::exp(log_floor - out.log_abs) + (converged ? opt.self_check_rel : 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Original axis, integrand e^{-y^2/2t} e^{-r cosh y} sinh(y) sin(pi y/t).
// Used for larger t, where the e^{pi^2/2t} cancellation fits in doubles and
// the e^{-r cosh y} decay keeps the range short even at large r.  Evaluated
// scaled by the envelope peak so huge r cannot underflow.
// ---------------------------------------------------------------------------

double orig_env_log(double y, double t, double r) {
  return -y * y / (2.0 * t) - r * std::cosh(y) + log_sinh(y);
}

IntegralValue orig_integrate_double(double r, double t, double budget_nats,
                                    const ThetaOptions& opt) {
  double hi = 1.0;
  while (orig_env_log(1.5 * hi, t, r) > orig_env_log(hi, t, r)) hi *= 1.5;
  const double y_peak = quad::golden_section_min(
      [&](double v) { return -orig_env_log(v, t, r); }, 1e-8, 1.5 * hi, 60);
  const double peak_log = orig_env_log(y_peak, t, r);
  double y_max = std::max(2.0 * y_peak, 1e-3);
  while (orig_env_log(y_max, t, r) > peak_log - (budget_nats + 5.0)) y_max *= 1.25;

  auto term = [&](double y) {
    if (y <= 0.0) return 0.0;
    return std::exp(orig_env_log(y, t, r) - peak_log) * std::sin(M_PI * y / t);
  };
  double h = std::min(2.0 * t / (10.0 * opt.safety), y_max / 64.0);
  long n = static_cast<long>(std::ceil(y_max / h));
  quad::KahanSum sum;
  for (long k = 1; k <= n; ++k) sum.add(term(k * h));
  double prev = sum.value() * h, value = prev;
  for (int round = 0; round < opt.max_refinements + 2; ++round) {
    const double h2 = 0.5 * h;
    for (long j = 1; j <= 2 * n; j += 2) sum.add(term(j * h2));
    h = h2;
    n *= 2;
    value = sum.value() * h;
    if (std::abs(value - prev) <= opt.self_check_rel * std::max(std::abs(value), 1e-280))
      break;
    prev = value;
  }
  IntegralValue out;
  out.log_peak = peak_log;
  const double floor_abs = static_cast<double>(n) * 4e-16;  // scaled peak is 1
  out.sign = value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
  out.log_abs = value != 0.0 ? peak_log + std::log(std::abs(value)) : kNegInf;
  if (std::abs(value) > 0.0)
    out.rel_err = floor_abs / std::abs(value) + opt.self_check_rel +
                  std::exp(-budget_nats - std::log(std::abs(value)));  // truncation
  return out;
}

// Original-axis trapezoid in MPFR, scaled by the envelope peak so precision
// tracks the cancellation alone.  Covers large r at small t, where the
// rotated form would need an exploding point count.
IntegralValue orig_integrate_mpfr(double r, double t, double budget_nats,
                                  const ThetaOptions& opt) {
  double hi = 1.0;
  while (orig_env_log(1.5 * hi, t, r) > orig_env_log(hi, t, r)) hi *= 1.5;
  const double y_peak = quad::golden_section_min(
      [&](double v) { return -orig_env_log(v, t, r); }, 1e-8, 1.5 * hi, 60);
  const double peak_log = orig_env_log(y_peak, t, r);
  double y_max = std::max(2.0 * y_peak, 1e-3);
  while (orig_env_log(y_max, t, r) > peak_log - (budget_nats + 5.0)) y_max *= 1.25;

  double h = std::min(2.0 * t / (10.0 * opt.safety), y_max / 64.0);
  long n = static_cast<long>(std::ceil(y_max / h));
  if (n > opt.max_points)
    throw AccuracyError("theta: oscillatory rule would need too many points");
  const double log2e = 1.4426950408889634;
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(
      (budget_nats + 40.0) * log2e + 64.0 + std::log2(static_cast<double>(n) + 2.0));

  Mp y(prec), tmp(prec), val(prec), sum(prec), hmp(prec), rmp(prec), inv2t(prec),
      piot(prec), sh(prec), ch(prec), peakmp(prec), prev(prec), integral(prec);
  mpfr_set_d(rmp, r, MPFR_RNDN);
  mpfr_set_d(inv2t, 2.0 * t, MPFR_RNDN);
  mpfr_ui_div(inv2t, 1, inv2t, MPFR_RNDN);
  mpfr_const_pi(piot, MPFR_RNDN);
  mpfr_div_d(piot, piot, t, MPFR_RNDN);
  mpfr_set_d(peakmp, peak_log, MPFR_RNDN);
  mpfr_set_zero(sum.ptr(), 1);
  mpfr_set_d(hmp, h, MPFR_RNDN);

  auto add_term = [&](long k) {
    mpfr_mul_si(y, hmp, k, MPFR_RNDN);
    // env - peak = -y^2/2t - r cosh y + log sinh y - peak
    mpfr_sqr(tmp, y, MPFR_RNDN);
    mpfr_mul(tmp, tmp, inv2t, MPFR_RNDN);
    mpfr_neg(tmp, tmp, MPFR_RNDN);
    mpfr_sinh_cosh(sh, ch, y, MPFR_RNDN);
    mpfr_mul(val, rmp, ch, MPFR_RNDN);
    mpfr_sub(tmp, tmp, val, MPFR_RNDN);
    mpfr_log(val, sh, MPFR_RNDN);
    mpfr_add(tmp, tmp, val, MPFR_RNDN);
    mpfr_sub(tmp, tmp, peakmp, MPFR_RNDN);
    mpfr_exp(val, tmp, MPFR_RNDN);
    mpfr_mul(tmp, piot, y, MPFR_RNDN);
    mpfr_sin(tmp, tmp, MPFR_RNDN);
    mpfr_mul(val, val, tmp, MPFR_RNDN);
    mpfr_add(sum, sum, val, MPFR_RNDN);
  };

  for (long k = 1; k <= n; ++k) add_term(k);
  mpfr_mul_d(prev.ptr(), sum.ptr(), h, MPFR_RNDN);
  bool converged = false;
  for (int round = 0; round < opt.max_refinements + 1; ++round) {
    const double h2 = 0.5 * h;
    mpfr_set_d(hmp, h2, MPFR_RNDN);
    for (long j = 1; j <= 2 * n; j += 2) add_term(j);
    h = h2;
    n *= 2;
    mpfr_mul_d(integral.ptr(), sum.ptr(), h, MPFR_RNDN);
    mpfr_sub(tmp, integral, prev, MPFR_RNDN);
    mpfr_abs(tmp, tmp, MPFR_RNDN);
    mpfr_abs(val, integral, MPFR_RNDN);
    mpfr_mul_d(val, val, opt.self_check_rel, MPFR_RNDN);
    const bool ok = mpfr_cmp(tmp, val) <= 0;
    mpfr_set(prev.ptr(), integral.ptr(), MPFR_RNDN);
    if (ok) {
      converged = true;
      break;
    }
  }
  mpfr_set(integral.ptr(), prev.ptr(), MPFR_RNDN);

  IntegralValue out;
  out.log_peak = peak_log;
  out.sign = mpfr_sgn(integral.ptr());
  if (out.sign != 0) {
    mpfr_abs(tmp, integral, MPFR_RNDN);
    mpfr_log(tmp, tmp, MPFR_RNDN);
    out.log_abs = peak_log + mpfr_get_d(tmp, MPFR_RNDN);  // undo the scaling
  }
  const double log_floor = peak_log + std::log(static_cast<double>(n)) -
                           static_cast<double>(prec) * M_LN2 + 6.0 * M_LN2;
  if (out.sign == 0 || out.log_abs < log_floor) {
    out.sign = 0;
    out.log_abs = kNegInf;
  } else {
    out.rel_err =
        std::exp(log_floor - out.log_abs) + (converged ? opt.self_check_rel : 1.0);
  }
  return out;
}

double log_prefactor(double r, double t) {
  return std::log(r) - 0.5 * std::log(2.0 * M_PI * M_PI * M_PI * t);
}

}  // namespace

double log_theta(double r, double t, const ThetaOptions& opt) {
  if (!(r > 0.0) || !(t > 0.0)) throw std::invalid_argument("theta needs r > 0, t > 0");
  if (t < opt.hard_min_t)
    throw AccuracyError("theta: t below the supported floor (use the small-time proxy)");

  const double accept_rel = 2e-7;
  const double rot_cancel = M_PI * M_PI / (8.0 * t);
  const double orig_cancel = M_PI * M_PI / (2.0 * t);

  // The original axis is cheap whenever the e^{-r cosh y} decay confines the
  // support within a fraction of the sin period (large r t^2), and for larger
  // t where the e^{pi^2/2t} cancellation fits in doubles.  Run it first: even
  // when its accuracy falls short, its measured value prices the MPFR budget.
  const auto probe =
      orig_integrate_double(r, t, std::min(orig_cancel + opt.tail_nats, 600.0), opt);
  if (probe.rel_err <= accept_rel)
    return probe.sign <= 0 ? kNegInf : log_prefactor(r, t) + orig_cancel + probe.log_abs;
  if (t >= opt.double_path_min_t) {
    const auto v = rot_integrate_double(r, t, rot_cancel + opt.tail_nats, opt);
    if (v.rel_err <= accept_rel)
      return v.sign <= 0 ? kNegInf : log_prefactor(r, t) + rot_cancel + v.log_abs;
  }

  // Certified MPFR paths with measured-deficit escalation.  A meaningful
  // probe routes straight to the original axis at the right budget; otherwise
  // the rotated form (cheap for the oscillatory core, budget anchored at
  // pi^2/8t) goes first and the original axis remains the fallback.
  const bool probe_meaningful = probe.sign > 0 && probe.rel_err < 0.05;
  for (int pass = 0; pass < 2; ++pass) {
    const bool original = probe_meaningful ? pass == 0 : pass == 1;
    const double combine = original ? orig_cancel : rot_cancel;
    double budget = original
                        ? (probe_meaningful
                               ? (probe.log_peak - probe.log_abs) + 2.0 * opt.tail_nats
                               : orig_cancel + opt.tail_nats)
                        : rot_cancel + opt.tail_nats;
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (!original && rot_plan(r, t, budget, opt).n > opt.max_points) break;
      const auto v = original ? orig_integrate_mpfr(r, t, budget, opt)
                              : rot_integrate_mpfr(r, t, budget, opt);
      if (v.sign > 0 && v.rel_err <= accept_rel)
        return log_prefactor(r, t) + combine + v.log_abs;
      if (v.sign < 0 && v.rel_err <= accept_rel) return kNegInf;  // sign is roundoff
      double deficit;
      if (v.sign == 0 || !std::isfinite(v.log_abs))
        deficit = 2.0 * budget;
      else
        deficit = std::max(0.0, (v.log_peak - v.log_abs) + opt.tail_nats - budget);
      budget += std::max(deficit + opt.tail_nats, 2.0 * budget);
      if (budget > 4.0e4) return kNegInf;  // theta/envelope < e^{-40000}: zero
    }
  }
  throw AccuracyError("theta: self-validation failed to converge");
}

double theta(double r, double t, const ThetaOptions& opt) {
  const double lt = log_theta(r, t, opt);
  return std::isfinite(lt) ? std::exp(lt) : 0.0;
}

ThetaTable::ThetaTable(double t, double r_lo, double r_hi, const ThetaOptions& opt)
    : t_(t), r_lo_(r_lo), r_hi_(r_hi) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw std::invalid_argument("bad theta table range");
  const double floor_y = -3.0e4;
  auto eval = [&](double x) {
    const double lt = yor::log_theta(std::exp(x), t_, opt);
    return std::isfinite(lt) ? std::max(lt - x, floor_y) : floor_y;
  };

  // Adaptive knots: log theta is gently curved in log r through the
  // oscillatory core but bends like -r at the far end, so refinement is
  // midpoint-driven per interval rather than global.
  const double lo = std::log(r_lo), hi = std::log(r_hi);
  std::vector<double> xs, ys;
  const int n0 = 33;
  xs.resize(n0);
  ys.resize(n0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n0; ++k) {
    xs[k] = lo + (hi - lo) * k / (n0 - 1);
    ys[k] = eval(xs[k]);
  }
  std::vector<char> settled(xs.size() - 1, 0);
  for (int round = 0; round < 12; ++round) {
    spline_ = quad::CubicSpline(xs, ys);
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
      if (!settled[k]) open.push_back(k);
    if (open.empty()) return;
    std::vector<double> mid_x(open.size()), mid_y(open.size());
    std::vector<char> ok(open.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t q = 0; q < open.size(); ++q) {
      const std::size_t k = open[q];
      mid_x[q] = 0.5 * (xs[k] + xs[k + 1]);
      mid_y[q] = eval(mid_x[q]);
      const bool dead = ys[k] <= floor_y + 1.0 && ys[k + 1] <= floor_y + 1.0;
      ok[q] = dead || std::abs(spline_(mid_x[q]) - mid_y[q]) <= 1e-6;
    }
    // Insert every paid-for midpoint; re-test only the halves of failures.
    std::vector<double> nx, ny;
    std::vector<char> nsettled;
    nx.reserve(xs.size() + open.size());
    ny.reserve(xs.size() + open.size());
    std::size_t q = 0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      nx.push_back(xs[k]);
      ny.push_back(ys[k]);
      if (q < open.size() && open[q] == k) {
        nx.push_back(mid_x[q]);
        ny.push_back(mid_y[q]);
        nsettled.push_back(ok[q]);
        nsettled.push_back(ok[q]);
        ++q;
      } else {
        nsettled.push_back(1);
      }
    }
    nx.push_back(xs.back());
    ny.push_back(ys.back());
    xs.swap(nx);
    ys.swap(ny);
    settled.swap(nsettled);
  }
  spline_ = quad::CubicSpline(xs, ys);
}

double ThetaTable::log_theta(double r) const {
  const double lr = std::log(r);
  return spline_(lr) + lr;
}

std::shared_ptr<const ThetaTable> theta_table(double t, double r_lo, double r_hi,
                                              const ThetaOptions& opt) {
  static std::map<std::uint64_t, std::shared_ptr<const ThetaTable>> cache;
  static std::mutex mutex;
  std::uint64_t key = 0;
  std::memcpy(&key, &t, sizeof(key));
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->covers(r_lo, r_hi)) return it->second;
  }
  double lo = r_lo, hi = r_hi;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) {
      lo = std::min(lo, it->second->r_lo());
      hi = std::max(hi, it->second->r_hi());
    }
  }
  auto table = std::make_shared<const ThetaTable>(t, lo / 1.3, hi * 1.3, opt);
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = table;
  return table;
}

}  // namespace rsasian::yor
