#include "rsasian/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rsasian::quad {

namespace {

Rule compute_gauss_legendre(int n) {
  Rule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    // Chebyshev-type initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double p_deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      p_deriv = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / p_deriv;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[k] = -x;
    rule.x[n - 1 - k] = x;
    const double w = 2.0 / ((1.0 - x * x) * p_deriv * p_deriv);
    rule.w[k] = w;
    rule.w[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
  static std::map<int, Rule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule composite(double lo, double hi, int npanels, int order) {
  std::vector<double> breaks(npanels + 1);
  for (int p = 0; p <= npanels; ++p)
    breaks[p] = lo + (hi - lo) * static_cast<double>(p) / npanels;
  return composite(breaks, order);
}

Rule composite(const std::vector<double>& breakpoints, int order) {
  const Rule& base = gauss_legendre(order);
  Rule rule;
  const std::size_t panels = breakpoints.size() - 1;
  rule.x.reserve(panels * base.size());
  rule.w.reserve(panels * base.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = breakpoints[p], b = breakpoints[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    if (half <= 0.0) continue;
    for (std::size_t k = 0; k < base.size(); ++k) {
      rule.x.push_back(mid + half * base.x[k]);
      rule.w.push_back(half * base.w[k]);
    }
  }
  return rule;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("spline needs >= 2 knots");
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    sub[i] = h0;
    diag[i] = 2.0 * (h0 + h1);
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  // Thomas solve for interior second derivatives, natural ends.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double f = sub[i] / diag[i - 1];
    diag[i] -= f * (x_[i] - x_[i - 1]);
    rhs[i] -= f * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    const double upper = x_[i + 1] - x_[i];
    m_[i] = (rhs[i] - (i + 2 < n ? upper * m_[i + 1] : 0.0)) / diag[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  std::size_t lo = 0, hi = x_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (x_[mid] <= x ? lo : hi) = mid;
  }
  const double h = x_[hi] - x_[lo];
  const double t = (x - x_[lo]) / h;
  const double u = 1.0 - t;
  return u * y_[lo] + t * y_[hi] +
         h * h / 6.0 * ((u * u * u - u) * m_[lo] + (t * t * t - t) * m_[hi]);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0,1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // One Halley step against the exact CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace rsasian::quad
