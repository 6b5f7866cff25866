#include "gwm/covariance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "gwm/errors.hpp"
#include "gwm/specfun.hpp"

namespace gwm {
namespace {

using std::numbers::pi;

void check_lag(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw DomainError("lag must be a finite norm >= 0, got " + std::to_string(r));
  }
}

// u^(n/2) K_{(n-2)/2}(u); half-integer orders in closed form.
double macdonald_kernel(int n, double u) {
  switch (n) {
    case 1:
      return std::sqrt(pi / 2.0) * std::exp(-u);
    case 3:
      return std::sqrt(pi / 2.0) * u * std::exp(-u);
    default:
      return u * specfun::bessel_k(specfun::Order(0.0), u);
  }
}

// x^(n/2) J_{(n-2)/2}(x).
double bessel_kernel(int n, double x) {
  switch (n) {
    case 1:
      return std::sqrt(2.0 / pi) * std::cos(x);
    case 3:
      return std::sqrt(2.0 / pi) * x * std::sin(x);
    default:
      return x * specfun::bessel_j(specfun::Order(0.0), x);
  }
}

double bessel_kernel_zero(int n, int k) {
  switch (n) {
    case 1:
      return (k - 0.5) * pi;
    case 3:
      return k * pi;
    default:
      return specfun::bessel_j_zero(specfun::Order(0.0), k);
  }
}

}  // namespace

void QuadConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("QuadConfig: tolerances must be positive");
  }
  if (max_subdivisions < 1) throw DomainError("QuadConfig: max_subdivisions must be >= 1");
  if (!(upper_cutoff >= 50.0)) throw DomainError("QuadConfig: upper_cutoff must be >= 50");
}

void ModelParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0,1], got " + std::to_string(alpha));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be > 0, got " + std::to_string(gamma));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be > 0, got " + std::to_string(lambda));
  }
  if (n < 1 || n > 3) throw DomainError("dimension n must be 1, 2 or 3");
}

void ModelParams::require_finite_variance() const {
  validate();
  const double threshold = 0.5 * n;
  const double ag = alpha * gamma;
  if (std::fabs(ag - threshold) <= 1e-14 * threshold) {
    throw VariancePoleError("variance pole: gamma == n/(2 alpha)");
  }
  if (ag < threshold) {
    throw InfiniteVarianceError("infinite variance: alpha*gamma = " + std::to_string(ag) +
                                " <= n/2");
  }
}

double spectral_density(const ModelParams& p, double omega_norm) {
  p.validate();
  if (!(omega_norm >= 0.0)) throw DomainError("spectral_density: |omega| must be >= 0");
  const double base = std::pow(omega_norm, 2.0 * p.alpha) + p.lambda * p.lambda;
  return std::pow(2.0 * pi, -p.n) * std::pow(base, -p.gamma);
}

double variance(const ModelParams& p) {
  p.require_finite_variance();
  const double n = p.n;
  const double a = p.alpha;
  const double log_value = (n / a - 2.0 * p.gamma) * std::log(p.lambda) -
                           n * std::numbers::ln2 - 0.5 * n * std::log(pi) - std::log(a) -
                           specfun::lgamma_abs(0.5 * n) +
                           specfun::lgamma_abs(p.gamma - n / (2.0 * a)) +
                           specfun::lgamma_abs(n / (2.0 * a)) - specfun::lgamma_abs(p.gamma);
  return std::exp(log_value);
}

double cov_closed_form_alpha1(const ModelParams& p, double r) {
  p.validate();
  if (p.alpha != 1.0) throw DomainError("cov_closed_form_alpha1 requires alpha == 1");
  if (!(p.gamma > 0.5 * p.n)) {
    throw InfiniteVarianceError("closed form requires gamma > n/2");
  }
  check_lag(r);
  if (r == 0.0) return variance(p);
  const double nu = p.gamma - 0.5 * p.n;
  const double x = p.lambda * r;
  const double k = specfun::bessel_k(specfun::Order(nu), x);
  if (k == 0.0) return 0.0;
  const double log_pref = (1.0 - 0.5 * p.n - p.gamma) * std::numbers::ln2 -
                          0.5 * p.n * std::log(pi) - specfun::lgamma_abs(p.gamma) +
                          nu * std::log(r / p.lambda);
  return std::exp(log_pref) * k;
}

double cov_macdonald(const ModelParams& p, double r, const QuadConfig& q) {
  p.validate();
  q.validate();
  if (!(p.alpha < 1.0)) throw DomainError("cov_macdonald requires alpha < 1");
  check_lag(r);
  if (r == 0.0) throw DomainError("cov_macdonald is undefined at r = 0");

  // u -> u/r applied to the Macdonald representation: the kernel argument is
  // u itself, and the lag enters only through s = (u/r)^(2 alpha).
  const int n = p.n;
  const double two_alpha = 2.0 * p.alpha;
  const double cos_pa = std::cos(pi * p.alpha);
  const double sin_pa = std::sin(pi * p.alpha);
  const double lam2 = p.lambda * p.lambda;
  const double gamma = p.gamma;
  const double log_r = std::log(r);
  auto integrand = [&](double u) {
    const double s = std::exp(two_alpha * (std::log(u) - log_r));
    const double re = lam2 + s * cos_pa;
    const double im = s * sin_pa;
    const double theta = std::atan2(im, re);
    const double log_mod = std::log(std::hypot(re, im));
    return macdonald_kernel(n, u) * std::exp(-gamma * log_mod) * std::sin(gamma * theta);
  };

  const double cutoff = q.upper_cutoff;
  // u where |e^{i pi alpha} s| equals lambda^2.
  const double knee = r * std::pow(p.lambda, 1.0 / p.alpha);
  // Panel edges: decades around the knee, then decades up to u = 1 so that
  // no single panel spans more than a factor of ten below the kernel scale.
  std::array<double, 48> pts{};
  std::size_t m = 0;
  pts[m++] = 0.0;
  for (double f : {1e-3, 1e-2, 1e-1, 1.0}) {
    const double v = knee * f;
    if (v > 0.0 && v < cutoff) pts[m++] = v;
  }
  for (double v = knee * 10.0; v < 1.0 && m < pts.size() - 8; v *= 10.0) pts[m++] = v;
  for (double v : {1.0, 5.0, 20.0, 50.0}) {
    if (v < cutoff) pts[m++] = v;
  }
  pts[m++] = cutoff;
  std::sort(pts.begin(), pts.begin() + m);
  const auto end = std::unique(pts.begin(), pts.begin() + m);
  const std::span<const double> points(pts.data(), static_cast<std::size_t>(end - pts.begin()));

  const double pref = std::pow(r, -n) / (std::pow(2.0, 0.5 * (n - 2)) * std::pow(pi, 0.5 * (n + 2)));
  // abs_tol applies to the covariance, not to the rescaled integral.
  QuadConfig scaled = q;
  scaled.abs_tol = q.abs_tol / pref;
  const auto res = integrate(integrand, points, scaled);
  if (!res.converged) {
    throw QuadratureError("cov_macdonald: quadrature did not converge at r = " + std::to_string(r),
                          pref * res.value, pref * res.abs_error);
  }
  return pref * res.value;
}

double cov_bochner(const ModelParams& p, double r, const QuadConfig& q) {
  p.validate();
  q.validate();
  if (!p.finite_variance()) {
    throw InfiniteVarianceError("cov_bochner requires alpha*gamma > n/2");
  }
  check_lag(r);
  if (r == 0.0) return variance(p);

  // omega -> x / r: C = (2 pi)^(-n/2) r^-n int_0^inf x^(n/2) J(x) env(x) dx.
  const int n = p.n;
  const double two_alpha = 2.0 * p.alpha;
  const double lam2 = p.lambda * p.lambda;
  const double log_r = std::log(r);
  auto integrand = [&](double x) {
    const double base = std::exp(two_alpha * (std::log(x) - log_r)) + lam2;
    return bessel_kernel(n, x) * std::exp(-p.gamma * std::log(base));
  };

  QuadConfig panel_cfg = q;
  panel_cfg.rel_tol = std::min(q.rel_tol, 1e-11);
  panel_cfg.abs_tol = 1e-15;
  panel_cfg.max_subdivisions = std::max(q.max_subdivisions, 400);

  double err_total = 0.0;
  auto panel = [&](double a, double b) {
    const double knee = r * std::pow(p.lambda, 1.0 / p.alpha);
    std::array<double, 5> pts{a, 0, 0, 0, b};
    std::size_t m = 1;
    for (double f : {0.1, 1.0, 10.0}) {
      const double v = knee * f;
      if (v > a && v < b) pts[m++] = v;
    }
    pts[m++] = b;
    std::sort(pts.begin(), pts.begin() + m);
    auto res = integrate(integrand, std::span<const double>(pts.data(), m), panel_cfg);
    err_total += res.abs_error;
    return res.value;
  };

  // Sum whole half-periods past the envelope knee, then accelerate the
  // alternating tail.
  const double start = std::max(50.0, 50.0 * r * std::pow(p.lambda, 1.0 / p.alpha));
  double sum = 0.0;
  int k = 1;
  double left = 0.0;
  double right = bessel_kernel_zero(n, k);
  while (right < start) {
    sum += panel(left, right);
    left = right;
    right = bessel_kernel_zero(n, ++k);
  }
  constexpr int kTerms = 40;
  std::vector<double> partial(kTerms + 1);
  partial[0] = sum;
  for (int j = 1; j <= kTerms; ++j) {
    sum += panel(left, right);
    partial[j] = sum;
    left = right;
    right = bessel_kernel_zero(n, ++k);
  }
  auto averaged = [](std::vector<double> s) {
    for (std::size_t level = s.size() - 1; level > 0; --level) {
      for (std::size_t i = 0; i < level; ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
    }
    return s[0];
  };
  const double full = averaged(partial);
  const double shorter = averaged(std::vector<double>(partial.begin(), partial.end() - 10));
  const double pref = std::pow(2.0 * pi, -0.5 * n) * std::pow(r, -n);
  const double err = pref * (std::fabs(full - shorter) + err_total);
  const double value = pref * full;
  if (err > std::max(q.abs_tol, 1e3 * q.rel_tol * std::fabs(value))) {
    throw QuadratureError("cov_bochner: alternating-tail acceleration did not settle", value, err);
  }
  return value;
}

double covariance(const ModelParams& p, double r, const QuadConfig& q) {
  p.validate();
  check_lag(r);
  if (r == 0.0) return variance(p);
  if (p.alpha == 1.0) return cov_closed_form_alpha1(p, r);
  return cov_macdonald(p, r, q);
}

double variogram(const ModelParams& p, double r, const QuadConfig& q) {
  p.require_finite_variance();
  check_lag(r);
  if (r == 0.0) return 0.0;
  return std::max(0.0, 2.0 * (variance(p) - covariance(p, r, q)));
}

std::vector<double> covariance_at(const ModelParams& p, std::span<const double> lags,
                                  const QuadConfig& q) {
  p.validate();
  q.validate();
  std::vector<double> out(lags.size());
  std::exception_ptr failure;
  const auto count = static_cast<long>(lags.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = covariance(p, lags[i], q);
    } catch (...) {
#pragma omp critical(gwm_covariance_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

CovarianceTable covariance_table(const ModelParams& p, double spacing, std::size_t count,
                                 const QuadConfig& q) {
  if (!(spacing > 0.0)) throw DomainError("covariance_table: spacing must be > 0");
  std::vector<double> lags(count);
  for (std::size_t k = 0; k < count; ++k) lags[k] = static_cast<double>(k) * spacing;
  return CovarianceTable{spacing, covariance_at(p, lags, q)};
}

}  // namespace gwm
