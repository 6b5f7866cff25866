#pragma once

// Gamma, Bessel J and Macdonald K of real order for real argument.

namespace gwm::specfun {

/// Bessel/Macdonald order. Accuracy targets hold for |nu| <= 5.
struct Order {
  double nu;
  constexpr explicit Order(double v) : nu(v) {}
};

/// Above this argument K_nu(x) is returned as exactly 0 (e^-705 is within a
/// few decades of the smallest normal double). Quadratures that integrate K
/// treat it as a hard truncation point.
inline constexpr double kMacdonaldCutoff = 705.0;

/// Gamma(x). Throws PoleError at non-positive integers.
double gamma_fn(double x);

/// 1/Gamma(x); exactly 0 at the poles of Gamma.
double rgamma(double x);

/// log|Gamma(x)|.
double lgamma_abs(double x);

/// psi(x) = Gamma'(x)/Gamma(x).
double digamma(double x);

/// J_nu(x) for x >= 0.
double bessel_j(Order order, double x);

/// K_nu(x) for x > 0; even in nu. Throws DomainError for x <= 0.
double bessel_k(Order order, double x);

/// Zeros of J_nu, k = 1, 2, ...
double bessel_j_zero(Order order, int k);

}  // namespace gwm::specfun
