#pragma once

#include <cstddef>
#include <vector>

#include "rsasian/errors.hpp"

namespace rsasian {

/// Markov-modulated market model: generator Q of a continuous-time chain on
/// {0,...,m-1} plus per-regime risk-free rate and volatility and a common
/// dividend rate.  Immutable once validated; all methods are pure.
class RegimeModel {
 public:
  /// Validates the generator conditions (q_ij >= 0 off-diagonal, zero row sums
  /// within `row_sum_tol`, q_i = -q_ii >= 0) and the coefficient conditions
  /// (sigma^2 > 0, r > 0, delta >= 0).  Throws ValidationError naming the
  /// violated condition.
  static RegimeModel validate(std::vector<std::vector<double>> q,
                              std::vector<double> r,
                              std::vector<double> sigma,
                              double delta,
                              double row_sum_tol = 1e-12);

  std::size_t regimes() const { return r_.size(); }
  double q(std::size_t i, std::size_t j) const { return q_[i * regimes() + j]; }
  /// Total exit rate q_i = -q_ii.
  double exit_rate(std::size_t i) const { return -q(i, i); }
  double rate(std::size_t i) const { return r_[i]; }
  double vol(std::size_t i) const { return sigma_[i]; }
  double dividend() const { return delta_; }

  /// Per-regime log-price drift nu(i) = r(i) - delta - sigma^2(i)/2.
  double drift(std::size_t i) const;
  /// Drift in Yor's normalization, 2*nu(i)/sigma^2(i).
  double yor_nu(std::size_t i) const;
  /// Clock change t' = sigma^2(i) * dt / 4.
  double time_scale(std::size_t i, double dt) const;

  /// True when no regime ever leaves its state (all q_i == 0), including m == 1.
  bool switching_inactive() const;

 private:
  RegimeModel() = default;
  std::vector<double> q_;  // row-major m x m
  std::vector<double> r_, sigma_;
  double delta_ = 0.0;
};

/// Contract of a single Asian option.
enum class OptionStyle { FloatingCall, FixedPut, FixedCallStarting };

const char* to_string(OptionStyle s);

struct OptionSpec {
  double t0 = 0.0;  ///< averaging start (years)
  double s = 0.0;   ///< valuation time, t0 <= s <= T
  double T = 1.0;   ///< maturity
  double x = 100.0; ///< spot, > 0
  double a = 0.0;   ///< running integral of the price over [t0, s], >= 0
  double strike = 0.0;           ///< fixed-strike styles only, > 0
  std::size_t start_regime = 0;  ///< state of the chain at s
  OptionStyle style = OptionStyle::FloatingCall;

  double window() const { return T - t0; }
  double horizon() const { return T - s; }
  double log_spot() const;

  /// Throws SpecError on violated invariants (including the fixed-call
  /// starting-only restriction, for which the mapping need not contract).
  void check(const RegimeModel& model) const;
};

/// Sup-norm Lipschitz factor of the floating-call operator for start regime i:
///   rho(i) = sum_{j != i} q_ij/(q_i + delta) * (1 - e^{-(q_i+delta)(T-s)}),
/// evaluated by its analytic limit (= 0) when q_i + delta == 0.
double contraction_factor(const RegimeModel& model, double s, double T, std::size_t i);
/// rho = max_i rho(i) < 1.
double overall_rho(const RegimeModel& model, double s, double T);

/// Same factor for the fixed-strike put kernel (no e^{z'} weight), whose time
/// decay is e^{-(q_i + r(i))(t-s)}.
double put_contraction_factor(const RegimeModel& model, double s, double T, std::size_t i);
double overall_put_rho(const RegimeModel& model, double s, double T);

/// Regime bond factors P_i(tau) = E_i[exp(-int_0^tau r(Y_u) du)], all i at once.
std::vector<double> bond_factors(const RegimeModel& model, double tau);

/// Discounted running-average factor
///   Phi_i(tau) = E_i[ exp(-int_0^tau r(Y_u)du) * int_0^tau X_u/X_0 du ]
/// which reduces to int_0^tau e^{-delta u} E_i[e^{-int_u^tau r}] du.
double discounted_average_factor(const RegimeModel& model, std::size_t i, double tau);

/// E[A_T | A_s = a, X_s = x] under constant coefficients (r, delta); the
/// r == delta case uses the limit a + x*(T-s).
double expected_average(double r, double delta, double s, double T, double x, double a);

}  // namespace rsasian
