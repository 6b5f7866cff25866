#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>

#include "gwm/asymptotics.hpp"
#include "gwm/covariance.hpp"
#include "gwm/errors.hpp"
#include "gwm/local_props.hpp"
#include "support/oracles.hpp"

using gwm::ModelParams;
using gwm::SmallLagRegime;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("alpha = 1 tail series terminates to the OU covariance") {
  for (double r : {0.5, 3.0, 12.0}) {
    const auto s = gwm::cov_tail_asymptotic({1, 1, 1, 1}, r, 4);
    CHECK(rel(s.value, 0.5 * std::exp(-r)) < 1e-14);
    CHECK(s.term_magnitudes.size() == 4);
    CHECK(s.term_magnitudes[1] == 0.0);
  }
  // Whittle-Matern with gamma = 2, n = 1: K_{3/2} series also terminates.
  const ModelParams p{1, 2, 1.4, 1};
  CHECK(rel(gwm::cov_tail_asymptotic(p, 2.5, 3).value, gwm::covariance(p, 2.5)) < 1e-13);
}

TEST_CASE("alpha = 1 leading tail is exponential, not algebraic") {
  const ModelParams p{1, 1.7, 1, 2};
  const double lead = gwm::cov_tail_leading(p, 40.0);
  CHECK(lead > 0.0);
  CHECK(rel(lead, gwm::covariance(p, 40.0)) < 0.02);
}

TEST_CASE("algebraic tail for alpha < 1") {
  const ModelParams p{0.5, 3, 1, 1};
  CHECK(std::fabs(gwm::covariance(p, 20.0) / gwm::cov_tail_leading(p, 20.0) - 1.0) < 0.05);
  // Leading term in its printed form.
  const double r = 20.0;
  const double lead = std::pow(2.0, 2 * p.alpha) * std::pow(p.lambda, -2 * p.gamma - 1) * p.gamma *
                      std::pow(pi, -1.5) * std::tgamma(p.alpha + 1) * std::tgamma(p.alpha + 0.5) *
                      std::sin(pi * p.alpha) * std::pow(r, -2 * p.alpha - 1);
  CHECK(rel(gwm::cov_tail_leading(p, r), lead) < 1e-12);

  // More terms help at large lag, and magnitudes are reported per term.
  const ModelParams q{0.5, 3, 1, 2};
  const double c = gwm::covariance(q, 50.0);
  const auto s1 = gwm::cov_tail_asymptotic(q, 50.0, 1);
  const auto s3 = gwm::cov_tail_asymptotic(q, 50.0, 3);
  CHECK(std::fabs(s3.value - c) < std::fabs(s1.value - c));
  CHECK(std::fabs(s3.value / c - 1.0) < 1e-3);
  CHECK(s3.term_magnitudes.size() == 3);
  // sin(2 pi alpha) = 0 at alpha = 1/2.
  CHECK(s3.term_magnitudes[1] < 1e-12 * s3.term_magnitudes[0]);
}

TEST_CASE("small-lag regimes and coefficients") {
  CHECK(gwm::small_lag_regime({1, 1, 1, 1}) == SmallLagRegime::Rough);
  CHECK(gwm::small_lag_regime({1, 1.5, 1, 1}) == SmallLagRegime::Borderline);
  CHECK(gwm::small_lag_regime({0.5, 5, 1, 1}) == SmallLagRegime::Smooth);
  CHECK_THROWS_AS(gwm::small_lag_regime({0.5, 1, 1, 1}), gwm::InfiniteVarianceError);

  // alpha*gamma = 1, n = 1: -2^-1 pi^-1/2 Gamma(-1/2) = 1.
  const auto law = gwm::small_lag_law({1, 1, 1, 1});
  CHECK(law.coefficient == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(law.exponent == doctest::Approx(1.0));
  CHECK(gwm::variogram({1, 1, 1, 1}, 1e-6) / 1e-6 == doctest::Approx(1.0).epsilon(1e-5));

  // Smooth case: curvature of the closed form at the origin.
  const ModelParams s{1, 2.5, 1, 1};
  const double h = 1e-3;
  const double curv = gwm::variogram(s, h) / (h * h);
  CHECK(rel(curv, gwm::small_lag_law(s).coefficient) < 1e-4);

  // Borderline uses the r^2 log(1/r) form.
  const ModelParams b{1, 1.5, 1, 1};
  const double r = 1e-3;
  CHECK(gwm::small_lag_law(b).regime == SmallLagRegime::Borderline);
  CHECK(rel(gwm::variogram_small_lag(b, r), gwm::small_lag_law(b).coefficient * r * r * std::log(1 / r)) <
        1e-14);
}

TEST_CASE("rough-regime variogram ratio tends to one") {
  for (auto p : {ModelParams{0.75, 1, 1, 1}, ModelParams{0.5, 2.5, 1, 2}, ModelParams{0.9, 2.0, 1.5, 3}}) {
    double prev = std::fabs(gwm::variogram(p, 1e-2) / gwm::variogram_small_lag(p, 1e-2) - 1.0);
    const double now = std::fabs(gwm::variogram(p, 1e-4) / gwm::variogram_small_lag(p, 1e-4) - 1.0);
    CHECK(now < prev);
    CHECK(now < 0.02);
  }
}

TEST_CASE("small-lag constant I") {
  // Gamma(-1/2) / (2^(3/2) Gamma(1)) = -sqrt(pi/2).
  CHECK(rel(gwm::appendix_constant_I(1.0, 1), -std::sqrt(pi / 2.0)) < 1e-14);
  for (int n : {1, 2, 3}) {
    for (double t : {0.05, 0.4, 0.95}) CHECK(gwm::appendix_constant_I(0.5 * n + t, n) < 0.0);
  }
  CHECK_THROWS_AS(gwm::appendix_constant_I(0.5, 1), gwm::DomainError);
  CHECK_THROWS_AS(gwm::appendix_constant_I(1.5, 1), gwm::DomainError);
  for (auto [ag, n] : {std::pair{0.8, 1}, std::pair{1.0, 1}, std::pair{1.2, 1}, std::pair{1.9, 3}}) {
    INFO("ag=" << ag << " n=" << n);
    CHECK(rel(oracle::regularized_I_limit(ag, n), gwm::appendix_constant_I(ag, n)) < 1e-6);
  }
}

TEST_CASE("borderline constant A") {
  CHECK_THROWS_AS(gwm::borderline_constant_A({1, 1.4, 1, 1}), gwm::DomainError);
  // A depends on lambda only through c3 log(lambda^2).
  const double a1 = gwm::borderline_constant_A({0.75, 2.0, 1.0, 1});
  const double a2 = gwm::borderline_constant_A({0.75, 2.0, 3.0, 1});
  const double c3 = 1.0 / (std::pow(2.0, 2.5) * 0.75 * std::tgamma(1.5));
  CHECK(std::fabs(a2 - a1 - c3 * std::log(9.0)) < 1e-9);
  // The gamma dependence enters through psi(1) - psi(gamma).
  const double b1 = gwm::borderline_constant_A({0.75, 2.0, 1.0, 1});
  const double b2 = gwm::borderline_constant_A({0.5, 3.0, 1.0, 1});
  const double c3b = 1.0 / (std::pow(2.0, 2.5) * 0.5 * std::tgamma(1.5));
  using boost::math::digamma;
  const double i3_1 = -c3 * (digamma(1.0) - digamma(2.0));
  const double i3_2 = -c3b * (digamma(1.0) - digamma(3.0));
  CHECK(std::fabs((b1 - i3_1) - (b2 - i3_2)) < 1e-8);
}

TEST_CASE("borderline constant reproduces the r^2 correction") {
  // variogram = B r^2 log(1/r) - 2 A (2 pi)^(-n/2) r^2 + o(r^2).
  for (auto p : {ModelParams{1, 1.5, 1, 1}, ModelParams{0.75, 2, 1.3, 1}, ModelParams{1, 2.5, 0.7, 3}}) {
    const double b = gwm::small_lag_law(p).coefficient;
    const double a = gwm::borderline_constant_A(p);
    const double r = 1e-4;
    const double k = (gwm::variogram(p, r) - b * r * r * std::log(1 / r)) / (r * r);
    const double expected = -2.0 * a * std::pow(2 * pi, -0.5 * p.n);
    INFO("n=" << p.n << " k=" << k << " expected=" << expected);
    CHECK(std::fabs(k - expected) < 1e-3 * std::fabs(expected) + 1e-4);
  }
}

TEST_CASE("local properties") {
  const auto a = gwm::local_props({1, 1.5, 1, 2});
  CHECK(a.holder_exponent == doctest::Approx(0.5));
  CHECK(a.fractal_dim == doctest::Approx(2.5));
  CHECK(a.lass_order.has_value());
  CHECK(*a.lass_order == doctest::Approx(0.5));
  CHECK(a.exponential_memory);
  CHECK_FALSE(a.memory_exponent.has_value());

  const auto t1 = gwm::local_props({0.5186, 4.1223, 1, 1});
  CHECK(t1.differentiable);
  CHECK(t1.holder_exponent == 1.0);
  CHECK(t1.fractal_dim == 1.0);
  CHECK_FALSE(t1.lass_order.has_value());
  CHECK(*t1.memory_exponent == doctest::Approx(2 * 0.5186 + 1));

  CHECK(*gwm::local_props({0.6, 2, 1, 1}).memory_exponent == doctest::Approx(2.2));
  CHECK_THROWS_AS(gwm::local_props({0.5, 1, 1, 1}), gwm::InfiniteVarianceError);

  for (int n : {1, 2, 3}) {
    for (double ag : {0.5 * n + 0.3, 0.5 * n + 1.0, 0.5 * n + 1.7}) {
      const ModelParams p{0.8, ag / 0.8, 1, n};
      const auto lp = gwm::local_props(p);
      CHECK(lp.differentiable == (gwm::small_lag_regime(p) == SmallLagRegime::Smooth));
      if (gwm::small_lag_regime(p) == SmallLagRegime::Rough) {
        CHECK(lp.fractal_dim == doctest::Approx(1.5 * n + 1 - ag));
        CHECK(*lp.lass_amplitude == doctest::Approx(0.5 * gwm::small_lag_law(p).coefficient));
      }
    }
  }
}

TEST_CASE("tangent field") {
  const ModelParams p{0.8, 1.0, 1.0, 1};
  const double amp = *gwm::local_props(p).lass_amplitude;
  const double hh = 2 * p.alpha_gamma() - p.n;
  CHECK(gwm::tangent_field_cov(p, 0.7, 0.7, 0.0) == doctest::Approx(2 * amp * std::pow(0.7, hh)));
  CHECK(gwm::tangent_field_cov(p, 0.0, 1.3, 1.3) == doctest::Approx(0.0));
  CHECK_THROWS_AS(gwm::tangent_field_cov({1, 2.5, 1, 1}, 1, 1, 0), gwm::DomainError);

  // Rescaled increment covariance converges to the tangent field.
  const double u = 1.0, v = 0.6, d = 0.4;
  double prev = 1e9;
  for (double rho : {0.1, 0.03, 0.01}) {
    const double c0 = gwm::variance(p);
    const double inc = gwm::covariance(p, rho * d) - gwm::covariance(p, rho * u) - gwm::covariance(p, rho * v) + c0;
    const double err = std::fabs(inc / std::pow(rho, hh) / gwm::tangent_field_cov(p, u, v, d) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}
