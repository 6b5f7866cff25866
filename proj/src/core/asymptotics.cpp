#include "gwm/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gwm/errors.hpp"
#include "gwm/specfun.hpp"

namespace gwm {
namespace {

using std::numbers::ln2;
using std::numbers::pi;
using specfun::lgamma_abs;

constexpr double kBorderlineTol = 1e-9;

bool is_borderline(double ag, int n) {
  const double edge = 0.5 * (n + 2);
  return std::fabs(ag - edge) <= kBorderlineTol * edge;
}

// J_nu(k)/k^nu - 1/(2^nu Gamma(n/2)) + k^2/(2^((n+2)/2) Gamma((n+2)/2)),
// nu = (n-2)/2. Series below k = 0.5 to avoid cancellation.
double bessel_minus_quadratic(int n, double k) {
  const double nu = 0.5 * (n - 2);
  if (k < 0.5) {
    double sum = 0.0;
    const double x2 = 0.25 * k * k;
    double power = x2 * x2;  // (k/2)^(2j) for j = 2
    double fact = 2.0;       // j!
    for (int j = 2; j < 30; ++j) {
      const double term = (j % 2 == 0 ? 1.0 : -1.0) * power / (fact * specfun::gamma_fn(nu + j + 1));
      sum += term;
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
      power *= x2;
      fact *= (j + 1);
    }
    return std::pow(2.0, -nu) * sum;
  }
  double reduced;
  switch (n) {
    case 1:
      reduced = std::sqrt(2.0 / pi) * std::cos(k);
      break;
    case 3:
      reduced = std::sqrt(2.0 / pi) * std::sin(k) / k;
      break;
    default:
      reduced = specfun::bessel_j(specfun::Order(0.0), k);
  }
  const double c0 = std::pow(2.0, -nu) / specfun::gamma_fn(0.5 * n);
  const double c2 = std::pow(2.0, -0.5 * (n + 2)) / specfun::gamma_fn(0.5 * (n + 2));
  return reduced - c0 + c2 * k * k;
}

}  // namespace

double cov_tail_leading(const ModelParams& p, double r) {
  return cov_tail_asymptotic(p, r, 1).value;
}

TailSeries cov_tail_asymptotic(const ModelParams& p, double r, int terms) {
  p.validate();
  if (!(r > 0.0)) throw DomainError("cov_tail_asymptotic: r must be > 0");
  if (terms < 1) throw DomainError("cov_tail_asymptotic: terms must be >= 1");
  const double n = p.n;
  TailSeries out;
  if (p.alpha < 1.0) {
    // term_j = pi^-(n+2)/2 Gamma(gamma+j)/(Gamma(gamma) j!) (-1)^(j-1)
    //          Gamma(alpha j + 1) Gamma(alpha j + n/2) 2^(2 alpha j)
    //          lambda^(-2 gamma - 2 j) sin(pi alpha j) r^(-2 alpha j - n)
    for (int j = 1; j <= terms; ++j) {
      const double aj = p.alpha * j;
      const double s = std::sin(pi * aj);
      double term = 0.0;
      if (s != 0.0) {
        const double log_mag = -0.5 * (n + 2) * std::log(pi) + lgamma_abs(p.gamma + j) -
                               lgamma_abs(p.gamma) - lgamma_abs(j + 1.0) + lgamma_abs(aj + 1.0) +
                               lgamma_abs(aj + 0.5 * n) + 2.0 * aj * ln2 -
                               (2.0 * p.gamma + 2.0 * j) * std::log(p.lambda) -
                               (2.0 * aj + n) * std::log(r);
        term = (j % 2 == 1 ? 1.0 : -1.0) * s * std::exp(log_mag);
      }
      out.value += term;
      out.term_magnitudes.push_back(std::fabs(term));
    }
    return out;
  }
  // alpha == 1: Bessel-K large-argument expansion of the closed form.
  const double h = 0.5 * (n - 1);
  const double log_pref = (0.5 * (1.0 - n) - p.gamma) * ln2 - h * std::log(pi) -
                          lgamma_abs(p.gamma) - p.lambda * r;
  for (int j = 0; j < terms; ++j) {
    const double inv = specfun::rgamma(p.gamma - j - h);
    double term = 0.0;
    if (inv != 0.0) {
      const double log_mag = log_pref + lgamma_abs(p.gamma + j - h) - j * ln2 -
                             lgamma_abs(j + 1.0) + (-j - p.gamma + h) * std::log(p.lambda) +
                             (-j + p.gamma - 0.5 * (n + 1)) * std::log(r);
      term = inv * std::exp(log_mag);
    }
    out.value += term;
    out.term_magnitudes.push_back(std::fabs(term));
  }
  return out;
}

SmallLagRegime small_lag_regime(const ModelParams& p) {
  p.require_finite_variance();
  const double ag = p.alpha_gamma();
  if (is_borderline(ag, p.n)) return SmallLagRegime::Borderline;
  return ag < 0.5 * (p.n + 2) ? SmallLagRegime::Rough : SmallLagRegime::Smooth;
}

SmallLagLaw small_lag_law(const ModelParams& p) {
  const auto regime = small_lag_regime(p);
  const double n = p.n;
  const double ag = p.alpha_gamma();
  switch (regime) {
    case SmallLagRegime::Rough: {
      const double c = -std::pow(2.0, 1.0 - 2.0 * ag) * std::pow(pi, -0.5 * n) *
                       specfun::gamma_fn(0.5 * n - ag) / specfun::gamma_fn(ag);
      return {regime, c, 2.0 * ag - n};
    }
    case SmallLagRegime::Borderline: {
      const double c = std::pow(2.0, -n) * std::pow(pi, -0.5 * n) / specfun::gamma_fn(0.5 * (n + 2));
      return {regime, c, 2.0};
    }
    case SmallLagRegime::Smooth:
    default: {
      const double m = (n + 2) / (2.0 * p.alpha);
      const double log_c = (-2.0 * p.gamma + (n + 2) / p.alpha) * std::log(p.lambda) -
                           (n + 1) * ln2 - 0.5 * n * std::log(pi) - std::log(p.alpha) -
                           lgamma_abs(0.5 * (n + 2)) + lgamma_abs(p.gamma - m) + lgamma_abs(m) -
                           lgamma_abs(p.gamma);
      return {regime, std::exp(log_c), 2.0};
    }
  }
}

double variogram_small_lag(const ModelParams& p, double r) {
  if (!(r > 0.0)) throw DomainError("variogram_small_lag: r must be > 0");
  const auto law = small_lag_law(p);
  const double shape = std::pow(r, law.exponent);
  if (law.regime == SmallLagRegime::Borderline) return law.coefficient * shape * std::log(1.0 / r);
  return law.coefficient * shape;
}

double appendix_constant_I(double alpha_gamma, int n) {
  if (n < 1 || n > 3) throw DomainError("appendix_constant_I: n must be 1, 2 or 3");
  const double lo = 0.5 * n;
  const double hi = 0.5 * (n + 2);
  if (!(alpha_gamma > lo && alpha_gamma < hi)) {
    throw DomainError("appendix_constant_I: alpha*gamma must lie in (n/2, (n+2)/2), got " +
                      std::to_string(alpha_gamma));
  }
  return specfun::gamma_fn(lo - alpha_gamma) /
         (std::pow(2.0, 2.0 * alpha_gamma - lo) * specfun::gamma_fn(alpha_gamma));
}

double borderline_constant_A(const ModelParams& p, const QuadConfig& q) {
  p.validate();
  const int n = p.n;
  if (!is_borderline(p.alpha_gamma(), n)) {
    throw DomainError("borderline_constant_A requires alpha*gamma == (n+2)/2");
  }
  QuadConfig cfg = q;
  cfg.rel_tol = std::min(q.rel_tol, 1e-11);
  cfg.abs_tol = 1e-14;
  cfg.max_subdivisions = std::max(q.max_subdivisions, 2000);

  // I1(0): with 2 alpha gamma = n + 2 the weight k^(n-1-2 ag) is k^-3.
  const auto inner = integrate([&](double k) { return bessel_minus_quadratic(n, k) / (k * k * k); },
                               0.0, 1.0, cfg);
  const double c2 = std::pow(2.0, -0.5 * (n + 2)) / specfun::gamma_fn(0.5 * (n + 2));
  const double c0 = std::pow(2.0, -0.5 * (n - 2)) / specfun::gamma_fn(0.5 * n);
  // Outer part: oscillatory piece panel by panel up to kOuter, then the
  // analytic -c0 int_1^inf k^-3 dk = -c0/2.
  constexpr double kOuter = 4000.0;
  auto oscillatory = [&](double k) {
    return (bessel_minus_quadratic(n, k) - c2 * k * k + c0) / (k * k * k);
  };
  double outer = 0.0;
  for (double a = 1.0; a < kOuter; a += 2.0 * pi) {
    outer += integrate(oscillatory, a, std::min(a + 2.0 * pi, kOuter), cfg).value;
  }
  outer -= 0.5 * c0;
  const double i1 = inner.value + outer;

  // I3(0) = -c3 int_0^inf [x^(gamma-1)/(1+x)^gamma - 1/(1+x)] dx.
  const double c3 = 1.0 / (std::pow(2.0, 0.5 * (n + 4)) * p.alpha * specfun::gamma_fn(0.5 * (n + 2)));
  const double g = p.gamma;
  const auto i3_int = integrate_to_infinity(
      [&](double x) {
        if (x == 0.0) return 0.0;
        return (std::exp((g - 1.0) * std::log(x / (1.0 + x))) - 1.0) / (1.0 + x);
      },
      0.0, cfg);
  const double i3 = -c3 * i3_int.value;
  return i1 + i3 + c3 * std::log(p.lambda * p.lambda);
}

}  // namespace gwm
