#pragma once

#include <cstddef>
#include <vector>

#include "gwm/quadrature.hpp"

namespace gwm {

/// Parameters (alpha, gamma, lambda, n) of the field with spectral density
/// (2 pi)^-n (|w|^(2 alpha) + lambda^2)^-gamma.
struct ModelParams {
  double alpha = 1.0;
  double gamma = 1.0;
  double lambda = 1.0;  // inverse length scale
  int n = 1;            // spatial dimension

  /// alpha in (0,1], gamma > 0, lambda > 0, n in {1,2,3}; throws DomainError.
  void validate() const;

  double alpha_gamma() const { return alpha * gamma; }
  bool finite_variance() const { return alpha * gamma > 0.5 * n; }

  /// validate() plus alpha*gamma > n/2; throws InfiniteVarianceError.
  void require_finite_variance() const;

  bool operator==(const ModelParams&) const = default;
};

/// C(k * spacing) for k = 0 .. values.size()-1.
struct CovarianceTable {
  double spacing = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

}  // namespace gwm
