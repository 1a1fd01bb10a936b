#include "rsasian/bridge_moments.hpp"

#include <cmath>
#include <stdexcept>

#include "rsasian/quadrature.hpp"

namespace rsasian::yor {

namespace {

// Gauss rule on [0,1].
struct Unit01 {
  std::vector<double> x, w;
  explicit Unit01(int n) {
    const auto& gl = quad::gauss_legendre(n);
    x.resize(gl.size());
    w.resize(gl.size());
    for (std::size_t k = 0; k < gl.size(); ++k) {
      x[k] = 0.5 * (gl.x[k] + 1.0);
      w[k] = 0.5 * gl.w[k];
    }
  }
};

}  // namespace

double bridge_cond_mean(double t, double zeta) {
  static const Unit01 rule(24);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double v = rule.x[k];
    acc += rule.w[k] * std::exp(2.0 * v * zeta + 2.0 * t * v * (1.0 - v));
  }
  return t * acc;
}

CondMoments bridge_cond_moments(double t, double zeta) {
  CondMoments m;
  m.m1 = bridge_cond_mean(t, zeta);

  static const Unit01 r2(16);
  // E W^2 = 2 t^2 ∫_0^1 ∫_0^y exp(2 zeta (v+y) + 2t[v(1-v)+y(1-y)+2v(1-y)]) dv dy
  double acc2 = 0.0;
  for (std::size_t ky = 0; ky < r2.x.size(); ++ky) {
    const double y = r2.x[ky];
    double inner = 0.0;
    for (std::size_t kv = 0; kv < r2.x.size(); ++kv) {
      const double v = y * r2.x[kv];
      const double var = v * (1.0 - v) + y * (1.0 - y) + 2.0 * v * (1.0 - y);
      inner += r2.w[kv] * std::exp(2.0 * zeta * (v + y) + 2.0 * t * var);
    }
    acc2 += r2.w[ky] * y * inner;
  }
  m.raw2 = 2.0 * t * t * acc2;

  static const Unit01 r3(12);
  // E W^3 = 6 t^3 over the ordered simplex v <= y <= u of exp(2 zeta Σ + 2t VarΣ).
  double acc3 = 0.0;
  for (std::size_t ku = 0; ku < r3.x.size(); ++ku) {
    const double u = r3.x[ku];
    double mid = 0.0;
    for (std::size_t ky = 0; ky < r3.x.size(); ++ky) {
      const double y = u * r3.x[ky];
      double inner = 0.0;
      for (std::size_t kv = 0; kv < r3.x.size(); ++kv) {
        const double v = y * r3.x[kv];
        const double var = v * (1.0 - v) + y * (1.0 - y) + u * (1.0 - u) +
                           2.0 * (v * (1.0 - y) + v * (1.0 - u) + y * (1.0 - u));
        inner += r3.w[kv] * std::exp(2.0 * zeta * (v + y + u) + 2.0 * t * var);
      }
      mid += r3.w[ky] * y * inner;
    }
    acc3 += r3.w[ku] * u * mid;
  }
  m.raw3 = 6.0 * t * t * t * acc3;
  return m;
}

ShiftedLognormal ShiftedLognormal::fit(const CondMoments& m) {
  ShiftedLognormal f;
  f.mean = m.m1;
  const double var = m.raw2 - m.m1 * m.m1;
  if (!(m.m1 > 0.0)) throw std::invalid_argument("conditional mean must be positive");
  if (var <= 0.0 || std::sqrt(std::max(var, 0.0)) < 1e-8 * m.m1) {
    f.degenerate = true;
    f.sd = 0.0;
    return f;
  }
  f.sd = std::sqrt(var);
  const double mu3 = m.raw3 - 3.0 * m.m1 * m.raw2 + 2.0 * m.m1 * m.m1 * m.m1;
  const double skew = mu3 / (var * f.sd);

  auto finish = [&](double omega, double shift_scale) {
    f.scale = shift_scale;
    f.sigma = std::sqrt(std::log(omega));
  };
  if (skew > 1e-4) {
    // (omega + 2) sqrt(omega - 1) = skew, increasing in omega > 1.
    double lo = 1.0, hi = 2.0;
    auto g = [](double w) { return (w + 2.0) * std::sqrt(w - 1.0); };
    while (g(hi) < skew) hi *= 2.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < skew ? lo : hi) = mid;
    }
    const double omega = 0.5 * (lo + hi);
    finish(omega, f.sd / std::sqrt(omega - 1.0));
  } else {
    // Plain lognormal through the first two moments.
    const double omega = 1.0 + var / (m.m1 * m.m1);
    finish(omega, m.m1);
  }
  return f;
}

double ShiftedLognormal::pdf(double w) const {
  if (degenerate) return 0.0;
  const double y = (w - mean) + scale;
  if (y <= 0.0) return 0.0;
  const double z = (std::log1p((w - mean) / scale) + 0.5 * sigma * sigma) / sigma;
  return quad::normal_pdf(z) / (y * sigma);
}

double ShiftedLognormal::quantile(double p) const {
  if (degenerate) return mean;
  const double z = quad::normal_quantile(p);
  return mean + scale * std::expm1(sigma * z - 0.5 * sigma * sigma);
}

}  // namespace rsasian::yor
