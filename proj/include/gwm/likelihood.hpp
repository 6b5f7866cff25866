#pragma once

#include <cstddef>
#include <span>

#include "gwm/model.hpp"
#include "gwm/quadrature.hpp"

namespace gwm {

/// Correlation parameters (alpha, gamma, ell) of the rescaled process.
struct ThetaPrime {
  double alpha = 1.0;
  double gamma = 1.0;
  double ell = 1.0;

  /// alpha in (0,1], alpha*gamma > 1/2, ell > 0.
  void validate() const;
  ModelParams model() const { return {alpha, gamma, 1.0, 1}; }
};

/// Process with covariance K^2 C_{alpha,gamma}(ell t), lambda = 1, n = 1.
struct ExtendedParams {
  double alpha = 1.0;
  double gamma = 1.0;
  double K = 1.0;
  double ell = 1.0;
  double s2 = 0.0;  // K^2 * variance_factor(alpha, gamma)

  ThetaPrime theta_prime() const { return {alpha, gamma, ell}; }

  /// Fills K from s2 (and keeps s2).
  static ExtendedParams from_s2(const ThetaPrime& tp, double s2);
  /// Fills s2 from K.
  static ExtendedParams from_K(const ThetaPrime& tp, double K);
};

/// Gamma(1/(2a)) Gamma(g - 1/(2a)) / (2 pi a Gamma(g)): C(0) at lambda = 1, n = 1.
double variance_factor(double alpha, double gamma);

/// K^2 covariance({alpha, gamma, 1, 1}, ell * lag).
double extended_cov(const ExtendedParams& theta, double lag, const QuadConfig& q = {});

/// rho(h) = C(ell h) / C(0), h = 0..N-1.
CovarianceTable correlation_table(const ThetaPrime& tp, std::size_t n, const QuadConfig& q = {});

/// y^T R^-1 y and log det R for the symmetric Toeplitz R with first row r,
/// from the Durbin recursion (O(N^2) time, O(N) memory).
struct ToeplitzSolve {
  double quad_form = 0.0;
  double log_det = 0.0;
};
ToeplitzSolve toeplitz_quad_logdet(std::span<const double> r, std::span<const double> y);

/// y^T rho^-1 y / N.
double profile_s2(std::span<const double> rho, std::span<const double> y);
double profile_s2(const ThetaPrime& tp, std::span<const double> y, const QuadConfig& q = {});

/// (N/2) log(y^T rho^-1 y) + (1/2) log det rho + (N/2)(1 + log 2 pi - log N).
double reduced_nll(std::span<const double> rho, std::span<const double> y);
double reduced_nll(const ThetaPrime& tp, std::span<const double> y, const QuadConfig& q = {});

/// Full negative log-likelihood at (theta', s2).
double nll(std::span<const double> rho, std::span<const double> y, double s2);

}  // namespace gwm
