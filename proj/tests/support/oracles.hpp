#pragma once

// Test-only reference computations. Nothing here calls into the library's
// quadrature or special-function code paths.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

inline Big big_pi() { return boost::math::constants::pi<Big>(); }

/// J_nu(x) from its power series in 50-digit arithmetic.
inline double bessel_j_series(double nu, double x) {
  const Big half_x = Big(x) / 2;
  const Big x2 = half_x * half_x;
  Big term = boost::multiprecision::pow(half_x, Big(nu)) / boost::math::tgamma(Big(nu) + 1);
  Big sum = term;
  for (int j = 1; j < 400; ++j) {
    term *= -x2 / (Big(j) * (Big(nu) + j));
    sum += term;
    if (boost::multiprecision::abs(term) < Big("1e-45") * boost::multiprecision::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

/// K_nu(x) for non-integer nu from the I_{-nu} - I_{nu} series, 50 digits.
inline double bessel_k_series(double nu_in, double x) {
  const Big nu = boost::multiprecision::abs(Big(nu_in));
  const Big half_x = Big(x) / 2;
  auto series = [&](const Big& order) {
    Big sum = 0;
    for (int j = 0; j < 400; ++j) {
      Big term = boost::multiprecision::pow(half_x, 2 * j + order) /
                 (boost::math::tgamma(Big(j + 1)) * boost::math::tgamma(order + j + 1));
      sum += term;
      if (j > 5 && boost::multiprecision::abs(term) < Big("1e-48")) break;
    }
    return sum;
  };
  const Big value = big_pi() / (2 * boost::multiprecision::sin(big_pi() * nu)) * (series(-nu) - series(nu));
  return static_cast<double>(value);
}

/// (1/pi) int_0^inf cos(w r) (w^2 + lambda^2)^-gamma dw: the n = 1, alpha = 1
/// covariance straight from the spectral integral (Ooura double exponential).
inline double matern_1d_fourier(double gamma, double lambda, double r) {
  boost::math::quadrature::ooura_fourier_cos<double> integrator;
  auto f = [&](double w) { return std::pow(w * w + lambda * lambda, -gamma); };
  return integrator.integrate(f, r).first / std::numbers::pi;
}

/// Radial form of the variance: int_0^inf w^(n-1) (w^(2a) + l^2)^-g dw times
/// 1/(2^(n-1) pi^(n/2) Gamma(n/2)).
inline double variance_radial(double alpha, double gamma, double lambda, int n) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double w) {
    return std::pow(w, n - 1) * std::pow(std::pow(w, 2 * alpha) + lambda * lambda, -gamma);
  };
  const double integral = integrator.integrate(f, 1e-14);
  return integral / (std::pow(2.0, n - 1) * std::pow(std::numbers::pi, 0.5 * n) * std::tgamma(0.5 * n));
}

/// Regularized small-lag integral
///   I(a) = int_0^inf [J_nu(k) k^-nu - 1/(2^nu Gamma(n/2))] k^(n-1) (k^2+a^2)^-ag dk
/// for n in {1, 3} (trigonometric kernels), nu = (n-2)/2.
inline double regularized_I(double ag, int n, double a) {
  const double nu = 0.5 * (n - 2);
  const double c0 = std::pow(2.0, -nu) / std::tgamma(0.5 * n);
  const double s2pi = std::sqrt(2.0 / std::numbers::pi);
  // J_nu(k) k^-nu - c0, series near the origin to avoid cancellation.
  auto bracket = [&](double k) {
    if (k < 0.5) {
      double sum = 0.0;
      double power = 1.0;
      const double x2 = 0.25 * k * k;
      for (int j = 1; j < 30; ++j) {
        power *= -x2 / j;
        sum += power / std::tgamma(nu + j + 1);
      }
      return std::pow(2.0, -nu) * sum;
    }
    const double reduced = n == 1 ? s2pi * std::cos(k) : s2pi * std::sin(k) / k;
    return reduced - c0;
  };
  auto weight = [&](double k) { return std::pow(k, n - 1) * std::pow(k * k + a * a, -ag); };

  constexpr double kSplit = 40.0 * std::numbers::pi;
  double head = 0.0;
  // Dense near the regularization scale, then whole periods.
  const double edges[] = {0.0, a, 10 * a, 100 * a, 1e-1, 1.0, 2 * std::numbers::pi};
  for (std::size_t i = 0; i + 1 < std::size(edges); ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    head += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double k) { return bracket(k) * weight(k); }, edges[i], edges[i + 1], 12, 1e-13);
  }
  for (double lo = 2 * std::numbers::pi; lo < kSplit - 1e-9; lo += 2 * std::numbers::pi) {
    head += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double k) { return bracket(k) * weight(k); }, lo, lo + 2 * std::numbers::pi, 8, 1e-13);
  }

  // Oscillatory tail: k^(n/2) J_nu(k) = sqrt(2/pi) {cos k, k sin k}.
  boost::math::quadrature::ooura_fourier_cos<double> fcos;
  boost::math::quadrature::ooura_fourier_sin<double> fsin;
  auto env = [&](double t) {
    const double k = kSplit + t;
    return (n == 1 ? 1.0 : k) * std::pow(k * k + a * a, -ag);
  };
  // cos(kSplit + t) = cos t and sin(kSplit + t) = sin t since kSplit = 40 pi.
  const double tail_osc = n == 1 ? s2pi * fcos.integrate(env, 1.0).first
                                 : s2pi * fsin.integrate(env, 1.0).first;
  boost::math::quadrature::exp_sinh<double> es;
  const double tail_const = c0 * es.integrate([&](double t) { return weight(kSplit + t); }, 1e-15);
  return head + tail_osc - tail_const;
}

/// Richardson extrapolation of regularized_I to a -> 0 from a1 and a1/10.
/// I(a) = I + c a^(2 - 2 nu') + O(a^2), nu' = ag - n/2.
inline double regularized_I_limit(double ag, int n, double a1 = 1e-3) {
  const double p = 2.0 - 2.0 * (ag - 0.5 * n);
  const double f = std::pow(10.0, p);
  const double i1 = regularized_I(ag, n, a1);
  const double i2 = regularized_I(ag, n, a1 / 10.0);
  return (f * i2 - i1) / (f - 1.0);
}

}  // namespace oracle
