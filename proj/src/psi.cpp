#include "rsasian/psi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsasian/quadrature.hpp"
#include "rsasian/yor_density.hpp"

namespace rsasian::yor {

void QuadratureConfig::check() const {
  if (z_order < 2 || w_order < 2 || outer_order < 2)
    throw std::invalid_argument("quadrature orders must be >= 2");
  if (z_panels < 1 || w_panels < 1) throw std::invalid_argument("panel counts must be >= 1");
  if (!(norm_tol > 0.0)) throw std::invalid_argument("normalization tolerance must be > 0");
  if (!(z_halfwidth_sd > 0.0)) throw std::invalid_argument("z half-width must be > 0");
  if (!(w_quantile_eps > 0.0 && w_quantile_eps < 0.5))
    throw std::invalid_argument("w quantile eps must be in (0, 0.5)");
}

PsiParams PsiParams::make(const RegimeModel& model, std::size_t i, double z, double a,
                          double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("psi needs dt > 0");
  PsiParams p;
  p.regime = i;
  p.z = z;
  p.a = a;
  p.dt = dt;
  p.t_prime = model.time_scale(i, dt);
  p.nu = model.yor_nu(i);
  p.c = 0.25 * model.vol(i) * model.vol(i) * std::exp(-z);
  return p;
}

namespace {

// Widened quantile envelope [w_lo, w_hi] of the conditional proxy.
void envelope_range(const ShiftedLognormal& env, double eps, double safety, double& w_lo,
                    double& w_hi) {
  const double q_lo = env.quantile(eps);
  const double q_hi = env.quantile(1.0 - eps);
  w_lo = q_lo - (safety - 1.0) * (env.mean - q_lo);
  w_hi = q_hi + (safety - 1.0) * (q_hi - env.mean);
  const double tiny = std::max(1e-12 * env.mean, 1e-300);
  w_lo = std::max(w_lo, std::min(tiny, 0.5 * q_lo));
  if (w_lo <= 0.0) w_lo = 0.5 * q_lo;
}

}  // namespace

PsiSlice::PsiSlice(const RegimeModel& model, std::size_t regime, double dt,
                   const QuadratureConfig& cfg)
    : dt_(dt),
      t_prime_(model.time_scale(regime, dt)),
      nu_(model.yor_nu(regime)),
      w_order_(cfg.w_order) {
  cfg.check();
  if (!(dt > 0.0)) throw std::invalid_argument("psi slice needs dt > 0");
  proxy_ = t_prime_ < cfg.tmin_prime;

  const double mean_z = 2.0 * nu_ * t_prime_;
  const double sd_z = 2.0 * std::sqrt(t_prime_);
  const auto z_rule = quad::composite(mean_z - cfg.z_halfwidth_sd * sd_z,
                                      mean_z + cfg.z_halfwidth_sd * sd_z, cfg.z_panels,
                                      cfg.z_order);
  nodes_.resize(z_rule.size());
  for (std::size_t p = 0; p < z_rule.size(); ++p) {
    ZNode& node = nodes_[p];
    node.zp = z_rule.x[p];
    node.zweight =
        z_rule.w[p] * quad::normal_pdf((node.zp - mean_z) / sd_z) / sd_z;
    node.proxy = proxy_;
    const auto moments = bridge_cond_moments(t_prime_, 0.5 * node.zp);
    node.envelope = ShiftedLognormal::fit(moments);
    envelope_range(node.envelope, cfg.w_quantile_eps, cfg.range_safety, node.w_lo,
                   node.w_hi);
  }

  if (!proxy_) {
    double r_lo = std::numeric_limits<double>::infinity(), r_hi = 0.0;
    for (const ZNode& node : nodes_) {
      if (node.envelope.degenerate) continue;
      r_lo = std::min(r_lo, std::exp(0.5 * node.zp) / node.w_hi);
      r_hi = std::max(r_hi, std::exp(0.5 * node.zp) / node.w_lo);
    }
    if (r_hi > 0.0) table_ = theta_table(t_prime_, r_lo / 1.2, r_hi * 1.2, cfg.theta);
  }

  for (std::size_t p = 0; p < nodes_.size(); ++p) build_conditional(nodes_[p], cfg);
}

double PsiSlice::cond_density(std::size_t p, double w) const {
  const ZNode& node = nodes_[p];
  if (node.proxy || node.envelope.degenerate) return node.envelope.pdf(w);
  const double lf = log_f_cond(*table_, 0.5 * node.zp, w);
  return std::isfinite(lf) && lf > -700.0 ? std::exp(lf) : 0.0;
}

void PsiSlice::build_conditional(ZNode& node, const QuadratureConfig& cfg) {
  if (node.envelope.degenerate) {
    node.raw_mass = 1.0;
    node.cond = {{node.envelope.mean, 1.0}};
    return;
  }
  const std::size_t p = static_cast<std::size_t>(&node - nodes_.data());
  const auto rule = quad::composite(std::log(node.w_lo), std::log(node.w_hi),
                                    cfg.w_panels, cfg.w_order);
  node.cond.resize(rule.size());
  double mass = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double w = std::exp(rule.x[q]);
    const double weight = rule.w[q] * w * cond_density(p, w);
    node.cond[q] = {w, weight};
    mass += weight;
  }
  node.raw_mass = mass;
  if (std::abs(mass - 1.0) > cfg.norm_tol) {
    std::ostringstream os;
    os << "psi conditional mass " << mass << " at z'=" << node.zp << " (t'=" << t_prime_
       << ", dt=" << dt_ << ", " << (node.proxy ? "proxy" : "yor") << " route)";
    throw AccuracyError(os.str());
  }
  for (auto& cn : node.cond) cn.weight /= mass;
}

double PsiSlice::identity_one() const {
  double acc = 0.0;
  for (const ZNode& n : nodes_) acc += n.zweight * n.raw_mass;
  return acc;
}

double PsiSlice::identity_expz() const {
  double acc = 0.0;
  for (const ZNode& n : nodes_) acc += n.zweight * std::exp(n.zp) * n.raw_mass;
  return acc;
}

double PsiSlice::integrate(const std::function<double(double, double)>& g) const {
  double acc = 0.0;
  for (const ZNode& n : nodes_) {
    double inner = 0.0;
    for (const CondNode& cn : n.cond) inner += cn.weight * g(n.zp, cn.w);
    acc += n.zweight * inner;
  }
  return acc;
}

std::vector<CondNode> PsiSlice::conditional_with_breakpoints(
    std::size_t p, const std::vector<double>& breaks) const {
  const ZNode& node = nodes_[p];
  if (node.envelope.degenerate) return node.cond;
  std::vector<double> bounds;
  bounds.reserve(breaks.size() + node.cond.size() / w_order_ + 2);
  const int panels = static_cast<int>(node.cond.size()) / w_order_;
  for (int k = 0; k <= panels; ++k)
    bounds.push_back(node.w_lo * std::pow(node.w_hi / node.w_lo,
                                          static_cast<double>(k) / panels));
  for (double b : breaks)
    if (b > node.w_lo && b < node.w_hi) bounds.push_back(b);
  std::sort(bounds.begin(), bounds.end());
  const auto rule = quad::composite(bounds, w_order_);
  std::vector<CondNode> out(rule.size());
  double mass = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double weight = rule.w[q] * cond_density(p, rule.x[q]);
    out[q] = {rule.x[q], weight};
    mass += weight;
  }
  if (mass <= 0.0) return node.cond;
  for (auto& cn : out) cn.weight /= mass;
  return out;
}

double psi_value(const PsiParams& p, double z_prime, double a_prime,
                 const QuadratureConfig& cfg) {
  if (a_prime < p.a) return 0.0;  // the pair never moves the integral backwards
  const double w = p.c * (a_prime - p.a);
  const double sd_z = 2.0 * std::sqrt(p.t_prime);
  const double marginal =
      quad::normal_pdf((z_prime - 2.0 * p.nu * p.t_prime) / sd_z) / sd_z;
  double conditional;
  if (w <= 0.0) return 0.0;
  if (p.t_prime >= cfg.tmin_prime) {
    conditional = f_cond(p.t_prime, 0.5 * z_prime, w, cfg.theta);
  } else {
    const auto moments = bridge_cond_moments(p.t_prime, 0.5 * z_prime);
    conditional = ShiftedLognormal::fit(moments).pdf(w);
  }
  return p.c * marginal * conditional;
}

}  // namespace rsasian::yor
