#include "gwm/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gwm/covariance.hpp"
#include "gwm/errors.hpp"
#include "gwm/specfun.hpp"

namespace gwm {
namespace {

using std::numbers::pi;

void check_lengths(std::span<const double> r, std::span<const double> y) {
  if (y.empty()) throw DomainError("likelihood needs at least one observation");
  if (r.size() < y.size()) throw DomainError("correlation table shorter than the series");
}

}  // namespace

void ThetaPrime::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be > 0");
  if (!(alpha * gamma > 0.5)) throw InfiniteVarianceError("alpha*gamma must exceed 1/2");
  if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("ell must be > 0");
}

double variance_factor(double alpha, double gamma) {
  ThetaPrime{alpha, gamma, 1.0}.validate();
  const double h = 0.5 / alpha;
  return std::exp(specfun::lgamma_abs(h) + specfun::lgamma_abs(gamma - h) - specfun::lgamma_abs(gamma)) /
         (2.0 * pi * alpha);
}

ExtendedParams ExtendedParams::from_s2(const ThetaPrime& tp, double s2) {
  if (!(s2 >= 0.0)) throw DomainError("s2 must be >= 0");
  return {tp.alpha, tp.gamma, std::sqrt(s2 / variance_factor(tp.alpha, tp.gamma)), tp.ell, s2};
}

ExtendedParams ExtendedParams::from_K(const ThetaPrime& tp, double K) {
  if (!(K > 0.0)) throw DomainError("K must be > 0");
  return {tp.alpha, tp.gamma, K, tp.ell, K * K * variance_factor(tp.alpha, tp.gamma)};
}

double extended_cov(const ExtendedParams& theta, double lag, const QuadConfig& q) {
  const auto tp = theta.theta_prime();
  tp.validate();
  if (!(lag >= 0.0)) throw DomainError("lag must be >= 0");
  return theta.K * theta.K * covariance(tp.model(), tp.ell * lag, q);
}

CovarianceTable correlation_table(const ThetaPrime& tp, std::size_t n, const QuadConfig& q) {
  tp.validate();
  if (n == 0) throw DomainError("correlation_table: N must be >= 1");
  auto t = covariance_table(tp.model(), tp.ell, n, q);
  const double c0 = t.values[0];
  for (double& v : t.values) v /= c0;
  t.values[0] = 1.0;
  t.spacing = 1.0;
  return t;
}

ToeplitzSolve toeplitz_quad_logdet(std::span<const double> r, std::span<const double> y) {
  check_lengths(r, y);
  const std::size_t n = y.size();
  if (!(r[0] > 0.0)) throw NotPositiveDefiniteError("Toeplitz diagonal must be positive");

  // phi holds the order-k forward predictor: yhat_k = sum_j phi[j] y_{k-1-j}.
  std::vector<double> phi;
  std::vector<double> next;
  phi.reserve(n);
  next.reserve(n);
  double v = r[0];
  ToeplitzSolve out;
  out.quad_form = y[0] * y[0] / v;
  out.log_det = std::log(v);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = r[k];
    for (std::size_t j = 0; j + 1 < k; ++j) acc -= phi[j] * r[k - 1 - j];
    const double kappa = acc / v;
    if (!(std::fabs(kappa) < 1.0)) {
      throw NotPositiveDefiniteError("Toeplitz matrix is not positive definite at order " + std::to_string(k));
    }
    next.assign(k, 0.0);
    for (std::size_t j = 0; j + 1 < k; ++j) next[j] = phi[j] - kappa * phi[k - 2 - j];
    next[k - 1] = kappa;
    phi.swap(next);
    v *= (1.0 - kappa) * (1.0 + kappa);
    if (!(v > 0.0)) throw NotPositiveDefiniteError("Toeplitz prediction variance vanished");

    double e = y[k];
    for (std::size_t j = 0; j < k; ++j) e -= phi[j] * y[k - 1 - j];
    out.quad_form += e * e / v;
    out.log_det += std::log(v);
  }
  return out;
}

double profile_s2(std::span<const double> rho, std::span<const double> y) {
  return toeplitz_quad_logdet(rho, y).quad_form / static_cast<double>(y.size());
}

double profile_s2(const ThetaPrime& tp, std::span<const double> y, const QuadConfig& q) {
  const auto rho = correlation_table(tp, y.size(), q);
  return profile_s2(rho.values, y);
}

double reduced_nll(std::span<const double> rho, std::span<const double> y) {
  const auto s = toeplitz_quad_logdet(rho, y);
  const double n = static_cast<double>(y.size());
  return 0.5 * n * std::log(s.quad_form) + 0.5 * s.log_det + 0.5 * n * (1.0 + std::log(2.0 * pi) - std::log(n));
}

double reduced_nll(const ThetaPrime& tp, std::span<const double> y, const QuadConfig& q) {
  const auto rho = correlation_table(tp, y.size(), q);
  return reduced_nll(rho.values, y);
}

double nll(std::span<const double> rho, std::span<const double> y, double s2) {
  if (!(s2 > 0.0)) throw DomainError("nll: s2 must be > 0");
  const auto s = toeplitz_quad_logdet(rho, y);
  const double n = static_cast<double>(y.size());
  return 0.5 * s.quad_form / s2 + 0.5 * n * std::log(s2) + 0.5 * s.log_det + 0.5 * n * std::log(2.0 * pi);
}

}  // namespace gwm
