#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gwm/errors.hpp"
#include "gwm/quadrature.hpp"
#include "gwm/specfun.hpp"
#include "support/oracles.hpp"

using gwm::specfun::Order;
using namespace gwm::specfun;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

TEST_CASE("gamma_fn values and poles") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_close(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-14));
  // Gamma(4.5) = 3.5 * 2.5 * 1.5 * 0.5 * sqrt(pi).
  const double g45 = 3.5 * 2.5 * 1.5 * 0.5 * std::sqrt(std::numbers::pi);
  CHECK(rel_close(gamma_fn(4.5), g45, 1e-13));
  CHECK_THROWS_AS(gamma_fn(0.0), gwm::PoleError);
  CHECK_THROWS_AS(gamma_fn(-3.0), gwm::PoleError);
  CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)));
  CHECK(rgamma(-2.0) == 0.0);
  CHECK(rgamma(0.0) == 0.0);
}

TEST_CASE("gamma_fn recurrence on [0.05, 50]") {
  for (double x = 0.05; x < 49.0; x += 0.37) {
    CHECK(rel_close(gamma_fn(x + 1.0), x * gamma_fn(x), 1e-12));
  }
}

TEST_CASE("bessel_j closed forms and zero") {
  CHECK(bessel_j(Order(0.0), 0.0) == 1.0);
  for (double x : {0.1, 1.0, 7.3, 150.0}) {
    const double expected = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
    CHECK(std::fabs(bessel_j(Order(0.5), x) - expected) <= 1e-14);
  }
  // First zero of J_0 located by bisection on the 50-digit series.
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::bessel_j_series(0.0, mid) > 0 ? lo : hi) = mid;
  }
  CHECK(std::fabs(lo - 2.404825557695773) < 1e-13);
  CHECK(std::fabs(bessel_j(Order(0.0), 2.404825557695773)) < 1e-10);
  CHECK(std::fabs(bessel_j_zero(Order(0.0), 1) - lo) < 1e-12);
}

TEST_CASE("bessel_j against high-precision series") {
  for (double nu : {-0.5, 0.0, 0.3, 1.0, 2.5, 4.2}) {
    for (double x : {0.05, 0.7, 3.1, 11.0, 24.0}) {
      if (nu < 0 && x == 0.0) continue;
      const double ref = oracle::bessel_j_series(nu, x);
      const double got = bessel_j(Order(nu), x);
      INFO("nu=" << nu << " x=" << x);
      CHECK(std::fabs(got - ref) <= std::max(1e-10 * std::fabs(ref), 1e-12));
    }
  }
}

TEST_CASE("bessel_k closed form, evenness and series oracle") {
  for (double x : {0.01, 0.5, 3.0, 40.0}) {
    const double expected = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
    CHECK(rel_close(bessel_k(Order(0.5), x), expected, 1e-14));
  }
  for (double nu : {0.2, 1.3, 3.7}) {
    for (double x : {0.3, 2.0, 15.0}) {
      CHECK(bessel_k(Order(nu), x) == bessel_k(Order(-nu), x));
    }
  }
  CHECK(rel_close(bessel_k(Order(0.3), 1.7), oracle::bessel_k_series(0.3, 1.7), 1e-12));
  for (double nu : {0.15, 0.75, 1.6, 2.4, 4.9}) {
    for (double x : {0.05, 0.8, 2.5, 9.0}) {
      INFO("nu=" << nu << " x=" << x);
      CHECK(rel_close(bessel_k(Order(nu), x), oracle::bessel_k_series(nu, x), 1e-10));
    }
  }
  CHECK_THROWS_AS(bessel_k(Order(1.0), 0.0), gwm::DomainError);
  CHECK_THROWS_AS(bessel_k(Order(1.0), -1.0), gwm::DomainError);
  CHECK(bessel_k(Order(1.0), 706.0) == 0.0);
  CHECK(bessel_k(Order(1.0), 700.0) > 0.0);
}

TEST_CASE("three-term order recurrences") {
  for (double nu : {0.4, 1.1, 2.7}) {
    for (double x : {0.3, 1.9, 6.5, 20.0}) {
      const double j_lhs = bessel_j(Order(nu - 1), x) + bessel_j(Order(nu + 1), x);
      const double j_rhs = 2.0 * nu / x * bessel_j(Order(nu), x);
      CHECK(std::fabs(j_lhs - j_rhs) <= 1e-9 * std::max(1.0, std::fabs(j_rhs)));
      const double k_lhs = bessel_k(Order(nu + 1), x) - bessel_k(Order(nu - 1), x);
      const double k_rhs = 2.0 * nu / x * bessel_k(Order(nu), x);
      CHECK(std::fabs(k_lhs - k_rhs) <= 1e-9 * std::fabs(k_rhs));
    }
  }
}

TEST_CASE("Mellin moment of K_nu") {
  // int_0^inf x^mu K_nu(x) dx = 2^(mu-1) Gamma((1+mu+nu)/2) Gamma((1+mu-nu)/2)
  gwm::QuadConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.max_subdivisions = 400;
  const double pts[] = {0.0, 1e-4, 1e-2, 0.1, 1.0, 5.0, 20.0, 60.0, 705.0};
  for (double mu : {0.0, 0.5, 1.5, 3.0}) {
    for (double nu : {0.0, 0.5, 0.9}) {
      if (!(mu + nu > -1 && mu - nu > -1)) continue;
      auto f = [&](double x) { return std::pow(x, mu) * bessel_k(Order(nu), x); };
      const auto res = gwm::integrate(f, std::span<const double>(pts), cfg);
      const double exact = std::pow(2.0, mu - 1) * gamma_fn(0.5 * (1 + mu + nu)) *
                           gamma_fn(0.5 * (1 + mu - nu));
      INFO("mu=" << mu << " nu=" << nu);
      CHECK(rel_close(res.value, exact, 1e-8));
    }
  }
}
