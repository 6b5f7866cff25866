#include "gwm/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gwm/errors.hpp"

namespace gwm::specfun {
namespace {

// Double-precision evaluation throughout; underflow returns 0.
using Policy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;

// Accuracy is contracted for |nu| <= 5; larger orders are still served for
// optimizer excursions.
constexpr double kMaxOrder = 60.0;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

void check_order(Order order) {
  if (!std::isfinite(order.nu) || std::fabs(order.nu) > kMaxOrder) {
    throw DomainError("Bessel order out of range |nu| <= 60: " +
                      std::to_string(order.nu));
  }
}

bool is_half(double nu) { return std::fabs(std::fabs(nu) - 0.5) == 0.0; }

}  // namespace

double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
  if (is_nonpositive_integer(x)) {
    throw PoleError("gamma_fn: pole at " + std::to_string(x));
  }
  return boost::math::tgamma(x, Policy());
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return 0.0;
  return 1.0 / boost::math::tgamma(x, Policy());
}

double lgamma_abs(double x) {
  if (is_nonpositive_integer(x)) {
    throw PoleError("lgamma_abs: pole at " + std::to_string(x));
  }
  return boost::math::lgamma(x, Policy());
}

double digamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw PoleError("digamma: pole at " + std::to_string(x));
  }
  return boost::math::digamma(x, Policy());
}

double bessel_j(Order order, double x) {
  check_order(order);
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("bessel_j: argument must be finite and >= 0");
  }
  if (is_half(order.nu)) {
    if (x == 0.0) {
      if (order.nu > 0) return 0.0;
      throw DomainError("bessel_j: J_{-1/2} is singular at 0");
    }
    const double scale = std::sqrt(2.0 / (std::numbers::pi * x));
    return order.nu > 0 ? scale * std::sin(x) : scale * std::cos(x);
  }
  return boost::math::cyl_bessel_j(order.nu, x, Policy());
}

double bessel_k(Order order, double x) {
  check_order(order);
  if (!(x > 0.0)) throw DomainError("bessel_k: argument must be > 0");
  if (x > kMacdonaldCutoff) return 0.0;
  const double nu = std::fabs(order.nu);
  if (nu == 0.5) {
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
  }
  return boost::math::cyl_bessel_k(nu, x, Policy());
}

double bessel_j_zero(Order order, int k) {
  check_order(order);
  if (k < 1) throw DomainError("bessel_j_zero: index must be >= 1");
  if (order.nu == -0.5) return (k - 0.5) * std::numbers::pi;
  if (order.nu == 0.5) return k * std::numbers::pi;
  if (order.nu >= 0.0) return boost::math::cyl_bessel_j_zero(order.nu, k, Policy());
  // McMahon expansion for the remaining negative orders.
  const double beta = (k + 0.5 * order.nu - 0.25) * std::numbers::pi;
  const double mu = 4.0 * order.nu * order.nu;
  return beta - (mu - 1.0) / (8.0 * beta);
}

}  // namespace gwm::specfun
