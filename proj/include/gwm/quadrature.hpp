#pragma once

// Globally adaptive Gauss-Kronrod (7/15-free, 10/21-point) integration in
// the style of QUADPACK's QAG, with caller-supplied breakpoints. The rule is
// open: endpoints are never evaluated.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace gwm {

struct QuadConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  /// Truncation point of semi-infinite Macdonald integrals.
  double upper_cutoff = 705.0;

  /// Throws DomainError when the invariants do not hold.
  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

namespace detail {

inline constexpr double kGkNodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kKronrodWeights[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kGaussWeights[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod21(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kKronrodWeights[10] * fc;
  double gauss = 0.0;
  double abs_sum = std::fabs(kronrod);
  double fv1[10], fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double x = half * kGkNodes[j];
    const double f1 = f(centre - x);
    const double f2 = f(centre + x);
    fv1[j] = f1;
    fv2[j] = f2;
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::fabs(fc - mean);
  for (int j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }
  const double scale = std::fabs(half);
  const double result = kronrod * half;
  abs_sum *= scale;
  asc *= scale;
  double err = std::fabs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * abs_sum, err);
  }
  return {a, b, result, err};
}

}  // namespace detail

/// Integrates f over [points.front(), points.back()], with every interior
/// point treated as an initial panel boundary. Points must be increasing.
template <class F>
QuadResult integrate(F&& f, std::span<const double> points, const QuadConfig& cfg) {
  std::priority_queue<detail::Panel> panels;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    auto p = detail::gauss_kronrod21(f, points[i], points[i + 1]);
    total += p.value;
    total_err += p.error;
    panels.push(p);
  }
  int count = static_cast<int>(panels.size());
  auto good_enough = [&] {
    return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
  };
  while (!good_enough() && count < cfg.max_subdivisions && !panels.empty()) {
    const auto worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    panels.pop();
    auto left = detail::gauss_kronrod21(f, worst.a, mid);
    auto right = detail::gauss_kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the incremental updates.
  total = 0.0;
  total_err = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_err += panels.top().error;
    panels.pop();
  }
  QuadResult out;
  out.value = total;
  out.abs_error = total_err;
  out.subdivisions = count;
  out.converged = total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
  return out;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadConfig& cfg) {
  const double pts[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts, 2), cfg);
}

/// Integral over [a, inf) through x = a + t/(1-t).
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, const QuadConfig& cfg) {
  auto g = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    return f(x) / (one_minus * one_minus);
  };
  const double pts[6] = {0.0, 0.5, 0.9, 0.99, 0.999, 1.0};
  return integrate(g, std::span<const double>(pts, 6), cfg);
}

}  // namespace gwm
