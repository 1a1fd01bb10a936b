#include "rsasian/yor_density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsasian::yor {

namespace {

double assemble(double t, double z, double w, double log_theta_value) {
  if (!std::isfinite(log_theta_value)) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log(2.0 * M_PI * t) + z * z / (2.0 * t) - std::log(w) -
         (1.0 + std::exp(2.0 * z)) / (2.0 * w) + log_theta_value;
}

}  // namespace

double log_f_cond(double t, double z, double w, const ThetaOptions& opt) {
  if (!(t > 0.0) || !(w > 0.0)) throw std::invalid_argument("f_cond needs t > 0, w > 0");
  const double r = std::exp(z) / w;
  return assemble(t, z, w, log_theta(r, t, opt));
}

double f_cond(double t, double z, double w, const ThetaOptions& opt) {
  const double lf = log_f_cond(t, z, w, opt);
  return std::isfinite(lf) && lf > -700.0 ? std::exp(lf) : 0.0;
}

double log_f_cond(const ThetaTable& table, double z, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("f_cond needs w > 0");
  const double r = std::exp(z) / w;
  return assemble(table.t(), z, w, table.log_theta(r));
}

}  // namespace rsasian::yor
