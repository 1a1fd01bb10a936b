#include <doctest.h>

#include <cmath>
#include <random>

#include "rsasian/model.hpp"

using namespace rsasian;

namespace {

RegimeModel two_state(double q12 = 1.0, double q21 = 1.0, double delta = 0.0) {
  return RegimeModel::validate({{-q12, q12}, {q21, -q21}}, {0.05, 0.08}, {0.2, 0.4}, delta);
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("generator validation accepts the standard two-state model") {
  auto m = two_state();
  CHECK(m.regimes() == 2);
  CHECK(m.exit_rate(0) == doctest::Approx(1.0));
  CHECK(m.q(0, 1) == doctest::Approx(1.0));
  CHECK(m.rate(1) == doctest::Approx(0.08));
  CHECK(m.vol(1) == doctest::Approx(0.4));
}

TEST_CASE("row sum violation is named") {
  CHECK_THROWS_WITH_AS(
      RegimeModel::validate({{-1.0, 1.1}, {1.0, -1.0}}, {0.05, 0.08}, {0.2, 0.4}, 0.0),
      doctest::Contains("RowSumNonZero"), ValidationError);
}

TEST_CASE("zero volatility is named") {
  try {
    RegimeModel::validate({{-1.0, 1.0}, {1.0, -1.0}}, {0.05, 0.08}, {0.2, 0.0}, 0.0);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.fault() == ModelFault::NonPositiveVolatility);
  }
}

TEST_CASE("negative off-diagonal and non-positive rate are named") {
  try {
    RegimeModel::validate({{0.5, -0.5}, {1.0, -1.0}}, {0.05, 0.08}, {0.2, 0.4}, 0.0);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.fault() == ModelFault::NegativeOffDiagonal);
  }
  try {
    RegimeModel::validate({{-1.0, 1.0}, {1.0, -1.0}}, {0.05, -0.01}, {0.2, 0.4}, 0.0);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.fault() == ModelFault::NonPositiveRate);
  }
}

TEST_CASE("row sum tolerance admits tiny numerical residue") {
  CHECK_NOTHROW(
      RegimeModel::validate({{-1.0, 1.0 + 1e-13}, {1.0, -1.0}}, {0.05, 0.08}, {0.2, 0.4}, 0.0));
}

TEST_CASE("random generators: valid accepted, corrupted rejected") {
  std::mt19937 gen(20240811u);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  std::uniform_int_distribution<int> msize(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = msize(gen);
    std::vector<std::vector<double>> q(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
      double sum = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != i) {
          q[i][j] = unif(gen);
          sum += q[i][j];
        }
      q[i][i] = -sum;
    }
    std::vector<double> r(m, 0.03), sigma(m, 0.25);
    CHECK_NOTHROW(RegimeModel::validate(q, r, sigma, 0.01));
    if (m >= 2) {
      auto bad = q;
      bad[0][0] -= 0.1;  // breaks the zero row sum
      CHECK_THROWS_AS(RegimeModel::validate(bad, r, sigma, 0.01), ValidationError);
    }
  }
}

TEST_CASE("contraction factor closed-form points") {
  // q_1 = 1, delta = 0, T - s = 1  ->  1 - e^{-1}
  auto m1 = two_state(1.0, 1.0, 0.0);
  CHECK(contraction_factor(m1, 0.0, 1.0, 0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  // q_12 = 2, delta = 1, T - s = 2  ->  (2/3)(1 - e^{-6})
  auto m2 = two_state(2.0, 1.0, 1.0);
  CHECK(contraction_factor(m2, 0.0, 2.0, 0) ==
        doctest::Approx(2.0 / 3.0 * (1.0 - std::exp(-6.0))).epsilon(1e-12));
  // absorbing state: empty sum
  auto m3 = RegimeModel::validate({{0.0, 0.0}, {1.0, -1.0}}, {0.05, 0.08}, {0.2, 0.4}, 0.0);
  CHECK(contraction_factor(m3, 0.0, 1.0, 0) == 0.0);
  CHECK(overall_rho(m1, 0.0, 1.0) < 1.0);
}

TEST_CASE("rho decreases strictly in delta and has the stated limits") {
  double prev = 1.0;
  for (double delta : {0.0, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32}) {
    const double rho = contraction_factor(two_state(1.0, 1.0, delta), 0.0, 1.0, 0);
    CHECK(rho < prev);
    prev = rho;
  }
  auto m = two_state(1.5, 1.0, 0.5);
  CHECK(contraction_factor(m, 0.0, 200.0, 0) == doctest::Approx(1.5 / 2.0).epsilon(1e-10));
  CHECK(contraction_factor(m, 0.0, 1e-12, 0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("derived scalars match their definitions") {
  auto m = two_state();
  CHECK(m.drift(0) == doctest::Approx(0.05 - 0.5 * 0.04));
  CHECK(m.yor_nu(0) == doctest::Approx(2.0 * m.drift(0) / 0.04));
  CHECK(m.time_scale(1, 0.0) == 0.0);
  CHECK(m.time_scale(1, 1.0) == doctest::Approx(0.04));
}

TEST_CASE("option spec invariants") {
  auto m = two_state();
  OptionSpec spec;
  spec.t0 = 0.0;
  spec.s = 0.5;
  spec.T = 1.0;
  spec.x = 100.0;
  spec.a = 40.0;
  CHECK_NOTHROW(spec.check(m));
  spec.style = OptionStyle::FixedCallStarting;
  spec.strike = 95.0;
  CHECK_THROWS_AS(spec.check(m), SpecError);  // in-progress fixed call
  spec.s = 0.0;
  spec.a = 0.0;
  CHECK_NOTHROW(spec.check(m));
  spec.s = -0.1;
  CHECK_THROWS_AS(spec.check(m), SpecError);
}

TEST_CASE("bond and discounted-average factors reduce to closed forms at m = 1") {
  auto m = RegimeModel::validate({{0.0}}, {0.05}, {0.3}, 0.02);
  const double tau = 1.7;
  CHECK(bond_factors(m, tau)[0] == doctest::Approx(std::exp(-0.05 * tau)).epsilon(1e-10));
  const double phi = discounted_average_factor(m, 0, tau);
  const double exact = std::exp(-0.05 * tau) * (std::exp(0.03 * tau) - 1.0) / 0.03;
  CHECK(phi == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("expected average handles the r == delta degenerate case") {
  CHECK(expected_average(0.05, 0.05, 0.0, 2.0, 100.0, 7.0) == doctest::Approx(207.0));
  CHECK(expected_average(0.05, 0.02, 0.5, 1.0, 100.0, 30.0) ==
        doctest::Approx(30.0 + 100.0 * std::expm1(0.03 * 0.5) / 0.03));
}

TEST_CASE("put contraction factor is below one and below the crude bound") {
  auto m = two_state(1.0, 2.0, 0.0);
  for (std::size_t i : {std::size_t{0}, std::size_t{1}}) {
    const double sharp = put_contraction_factor(m, 0.0, 1.0, i);
    const double qi = m.exit_rate(i);
    const double crude = qi > 0.0 ? (1.0 - std::exp(-qi * 1.0)) : 0.0;
    CHECK(sharp < 1.0);
    CHECK(sharp <= crude + 1e-12);
  }
  CHECK(overall_put_rho(m, 0.0, 1.0) < 1.0);
}

}  // TEST_SUITE
