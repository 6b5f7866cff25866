#include "gwm/local_props.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gwm/asymptotics.hpp"
#include "gwm/errors.hpp"
#include "gwm/specfun.hpp"

namespace gwm {
namespace {

double lass_amplitude(double ag, int n) {
  return -specfun::gamma_fn(0.5 * n - ag) /
         (std::pow(2.0, 2.0 * ag) * std::pow(std::numbers::pi, 0.5 * n) * specfun::gamma_fn(ag));
}

}  // namespace

LocalProps local_props(const ModelParams& p) {
  p.require_finite_variance();
  const double ag = p.alpha_gamma();
  const double n = p.n;
  const auto regime = small_lag_regime(p);

  LocalProps out;
  out.holder_exponent = std::min(ag - 0.5 * n, 1.0);
  out.fractal_dim = n + 1.0 - out.holder_exponent;
  out.differentiable = regime == SmallLagRegime::Smooth;
  if (regime == SmallLagRegime::Rough) {
    out.lass_order = ag - 0.5 * n;
    out.lass_amplitude = lass_amplitude(ag, p.n);
  }
  if (p.alpha < 1.0) {
    out.memory_exponent = 2.0 * p.alpha + n;
  } else {
    out.exponential_memory = true;
  }
  return out;
}

double tangent_field_cov(const ModelParams& p, double u, double v, double uv_dist) {
  p.require_finite_variance();
  if (small_lag_regime(p) != SmallLagRegime::Rough) {
    throw DomainError("tangent field requires alpha*gamma in (n/2, (n+2)/2)");
  }
  if (!(u >= 0.0 && v >= 0.0 && uv_dist >= 0.0)) {
    throw DomainError("tangent_field_cov: arguments are norms and must be >= 0");
  }
  const double ag = p.alpha_gamma();
  const double two_h = 2.0 * ag - p.n;
  const double a = lass_amplitude(ag, p.n);
  return a * (std::pow(u, two_h) + std::pow(v, two_h) - std::pow(uv_dist, two_h));
}

}  // namespace gwm
