#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rsasian::quad {

/// Nodes/weights of an integration rule.
struct Rule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

/// Gauss-Legendre rule of order n on [-1, 1]; computed once and cached.
const Rule& gauss_legendre(int n);

/// Composite Gauss-Legendre over [lo, hi] split into npanels equal panels.
Rule composite(double lo, double hi, int npanels, int order);

/// Composite Gauss-Legendre over consecutive intervals of a sorted breakpoint list.
Rule composite(const std::vector<double>& breakpoints, int order);

/// Compensated (Kahan) running sum.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

/// Natural cubic spline through strictly increasing abscissas.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;  // clamps outside the knot range
  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

/// Golden-section minimization of a unimodal function on [lo, hi].
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          int iterations = 40);

double normal_pdf(double u);
double normal_cdf(double u);
/// Inverse standard normal CDF (rational initial guess + one Halley step);
/// deterministic across runs, |error| < 1e-13.
double normal_quantile(double p);

}  // namespace rsasian::quad
