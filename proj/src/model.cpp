#include "rsasian/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rsasian {

RegimeModel RegimeModel::validate(std::vector<std::vector<double>> q,
                                  std::vector<double> r,
                                  std::vector<double> sigma,
                                  double delta,
                                  double row_sum_tol) {
  const std::size_t m = r.size();
  if (m == 0 || sigma.size() != m || q.size() != m)
    throw std::invalid_argument("model dimensions inconsistent");
  for (const auto& row : q)
    if (row.size() != m) throw std::invalid_argument("generator must be square");
  if (delta < 0.0) throw std::invalid_argument("dividend rate must be nonnegative");

  RegimeModel model;
  model.q_.resize(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    double off_diag_sum = 0.0, row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      row_sum += q[i][j];
      if (j != i) {
        if (q[i][j] < 0.0) {
          std::ostringstream os;
          os << "q[" << i << "][" << j << "] = " << q[i][j] << " < 0";
          throw ValidationError(ModelFault::NegativeOffDiagonal, os.str());
        }
        off_diag_sum += q[i][j];
        model.q_[i * m + j] = q[i][j];
      }
    }
    if (std::abs(row_sum) > row_sum_tol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << row_sum << " (tolerance " << row_sum_tol << ")";
      throw ValidationError(ModelFault::RowSumNonZero, os.str());
    }
    // Canonicalize so exit_rate(i) == sum of off-diagonals exactly.
    model.q_[i * m + i] = -off_diag_sum;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(sigma[i] > 0.0)) {
      std::ostringstream os;
      os << "sigma[" << i << "] = " << sigma[i];
      throw ValidationError(ModelFault::NonPositiveVolatility, os.str());
    }
    if (!(r[i] > 0.0)) {
      std::ostringstream os;
      os << "r[" << i << "] = " << r[i];
      throw ValidationError(ModelFault::NonPositiveRate, os.str());
    }
  }
  model.r_ = std::move(r);
  model.sigma_ = std::move(sigma);
  model.delta_ = delta;
  return model;
}

double RegimeModel::drift(std::size_t i) const {
  return r_[i] - delta_ - 0.5 * sigma_[i] * sigma_[i];
}

double RegimeModel::yor_nu(std::size_t i) const {
  return 2.0 * drift(i) / (sigma_[i] * sigma_[i]);
}

double RegimeModel::time_scale(std::size_t i, double dt) const {
  return 0.25 * sigma_[i] * sigma_[i] * dt;
}

bool RegimeModel::switching_inactive() const {
  for (std::size_t i = 0; i < regimes(); ++i)
    if (exit_rate(i) > 0.0) return false;
  return true;
}

const char* to_string(OptionStyle s) {
  switch (s) {
    case OptionStyle::FloatingCall: return "floating-call";
    case OptionStyle::FixedPut: return "fixed-put";
    case OptionStyle::FixedCallStarting: return "fixed-call-starting";
  }
  return "unknown";
}

double OptionSpec::log_spot() const { return std::log(x); }

void OptionSpec::check(const RegimeModel& model) const {
  if (!(T > t0)) throw SpecError("averaging window requires T > t0");
  if (s < t0 || s > T) throw SpecError("valuation time must satisfy t0 <= s <= T");
  if (!(x > 0.0)) throw SpecError("spot must be positive");
  if (a < 0.0) throw SpecError("running integral must be nonnegative");
  if (start_regime >= model.regimes()) throw SpecError("start regime out of range");
  if (style != OptionStyle::FloatingCall && !(strike > 0.0))
    throw SpecError("fixed-strike styles require a positive strike");
  if (style == OptionStyle::FixedCallStarting && (s != t0 || a != 0.0))
    throw SpecError(
        "fixed-strike call supports starting options only (s == t0, a == 0); "
        "for in-progress contracts the mapping need not be a contraction");
}

namespace {

// (1 - e^{-k tau}) / k, continuous at k == 0.
double decay_mass(double k, double tau) {
  if (k * tau < 1e-13) return tau;
  return -std::expm1(-k * tau) / k;
}

}  // namespace

double contraction_factor(const RegimeModel& model, double s, double T, std::size_t i) {
  const double k = model.exit_rate(i) + model.dividend();
  double sum = 0.0;
  for (std::size_t j = 0; j < model.regimes(); ++j)
    if (j != i) sum += model.q(i, j);
  return sum * decay_mass(k, T - s);
}

double overall_rho(const RegimeModel& model, double s, double T) {
  double rho = 0.0;
  for (std::size_t i = 0; i < model.regimes(); ++i)
    rho = std::max(rho, contraction_factor(model, s, T, i));
  return rho;
}

double put_contraction_factor(const RegimeModel& model, double s, double T, std::size_t i) {
  const double k = model.exit_rate(i) + model.rate(i);
  double sum = 0.0;
  for (std::size_t j = 0; j < model.regimes(); ++j)
    if (j != i) sum += model.q(i, j);
  return sum * decay_mass(k, T - s);
}

double overall_put_rho(const RegimeModel& model, double s, double T) {
  double rho = 0.0;
  for (std::size_t i = 0; i < model.regimes(); ++i)
    rho = std::max(rho, put_contraction_factor(model, s, T, i));
  return rho;
}

namespace {

// One RK4 sweep of dv/dt = A v for the m-vector v, A row-major.
void rk4_linear(const std::vector<double>& A, std::vector<double>& v, double h, int steps) {
  const std::size_t m = v.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  auto mul = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += A[i * m + j] * in[j];
      out[i] = acc;
    }
  };
  for (int n = 0; n < steps; ++n) {
    mul(v, k1);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    mul(tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
    mul(tmp, k3);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = v[i] + h * k3[i];
    mul(tmp, k4);
    for (std::size_t i = 0; i < m; ++i)
      v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

int ladder_steps(double tau) {
  return std::max(64, static_cast<int>(std::ceil(tau * 256.0)));
}

// Tabulates v(t_n) for t_n = n*h, n = 0..steps, of dv/dt = A v.
std::vector<std::vector<double>> rk4_ladder(const std::vector<double>& A,
                                            std::vector<double> v0, double h, int steps) {
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  out.push_back(v0);
  for (int n = 0; n < steps; ++n) {
    rk4_linear(A, v0, h, 1);
    out.push_back(v0);
  }
  return out;
}

}  // namespace

std::vector<double> bond_factors(const RegimeModel& model, double tau) {
  const std::size_t m = model.regimes();
  std::vector<double> A(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      A[i * m + j] = model.q(i, j) - (i == j ? model.rate(i) : 0.0);
  std::vector<double> v(m, 1.0);
  if (tau <= 0.0) return v;
  const int steps = ladder_steps(tau);
  rk4_linear(A, v, tau / steps, steps);
  return v;
}

double discounted_average_factor(const RegimeModel& model, std::size_t i, double tau) {
  if (tau <= 0.0) return 0.0;
  const std::size_t m = model.regimes();
  const int steps = 2 * ladder_steps(tau);  // even count for Simpson
  const double h = tau / steps;

  // Bond ladder P(t_n) and transition ladder rows of e^{t_n Q} from state i.
  std::vector<double> Abond(m * m), Achain(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      Abond[a * m + b] = model.q(a, b) - (a == b ? model.rate(a) : 0.0);
      // Row vector p(t) = p(0) e^{tQ} solves dp/dt = p Q, i.e. dp^T/dt = Q^T p^T.
      Achain[a * m + b] = model.q(b, a);
    }
  auto bond = rk4_ladder(Abond, std::vector<double>(m, 1.0), h, steps);
  std::vector<double> p0(m, 0.0);
  p0[i] = 1.0;
  auto occ = rk4_ladder(Achain, p0, h, steps);

  // Simpson over u of e^{-delta u} * sum_j P(Y_u = j | Y_0 = i) * P_j(tau - u).
  auto integrand = [&](int n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += occ[n][j] * bond[steps - n][j];
    return std::exp(-model.dividend() * (n * h)) * acc;
  };
  double sum = integrand(0) + integrand(steps);
  for (int n = 1; n < steps; n += 2) sum += 4.0 * integrand(n);
  for (int n = 2; n < steps; n += 2) sum += 2.0 * integrand(n);
  return sum * h / 3.0;
}

double expected_average(double r, double delta, double s, double T, double x, double a) {
  const double tau = T - s;
  const double k = r - delta;
  if (std::abs(k) * tau < 1e-13) return a + x * tau;
  return a + x * std::expm1(k * tau) / k;
}

}  // namespace rsasian
